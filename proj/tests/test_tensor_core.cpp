#include "oracles.hpp"

#include <blissthc/errors.hpp>
#include <blissthc/fock.hpp>
#include <blissthc/hamiltonian.hpp>

#include <gtest/gtest.h>

using namespace blissthc::tensor_core;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Tensor4, RandomInstanceHasEightFoldSymmetry) {
  const auto H = oracle::random_hamiltonian(3, 2, 1);
  EXPECT_EQ(H.g().symmetry_defect(), 0.0);
  EXPECT_TRUE(H.g().all_finite());
}

TEST(Tensor4, SupermatrixViewIsRowMajorPairIndex) {
  Tensor4 g(2);
  g(1, 0, 0, 1) = 3.0;
  EXPECT_EQ(g.matrix()(2, 1), 3.0);
  const auto back = Tensor4::from_matrix(2, g.matrix());
  EXPECT_EQ(frobenius_distance(g, back), 0.0);
}

TEST(Hamiltonian, RejectsAsymmetricOneBody) {
  Eigen::MatrixXd h(2, 2);
  h << 1, 2, 3, 4;
  EXPECT_THROW(ElectronicHamiltonian(h, Tensor4(2), 2), blissthc::Error);
}

TEST(Hamiltonian, OneBodyMatrixMatchesLoop) {
  const auto H = oracle::random_hamiltonian(3, 2, 2);
  const auto T = one_body_matrix(H);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) {
      double v = H.h()(p, q);
      for (std::size_t r = 0; r < 3; ++r) v += -0.5 * H.g()(p, r, r, q) + H.g()(p, q, r, r);
      EXPECT_NEAR(T(p, q), v, 1e-14);
    }
}

TEST(Hamiltonian, ZeroShiftIsThcLimit) {
  const auto H = oracle::random_hamiltonian(3, 2, 3);
  const auto s = apply_bliss_shift(H, SymmetryShiftParams::zero(3));
  EXPECT_LT(max_abs(s.kappa - one_body_matrix(H)), 1e-14);
  EXPECT_EQ(frobenius_distance(s.g, H.g()), 0.0);
}

TEST(Hamiltonian, OneNormsByHand) {
  Eigen::MatrixXd T = Eigen::Vector2d(1.0, -2.0).asDiagonal();
  Eigen::MatrixXd zeta(2, 2);
  zeta << 4.0, -1.0, -1.0, 2.0;
  const auto r = one_norms(T, zeta);
  EXPECT_DOUBLE_EQ(r.lambda_plain, 3.0 + 0.5 * 8.0);
  EXPECT_DOUBLE_EQ(r.lambda_circ, 7.0 - 0.25 * 6.0);
  EXPECT_DOUBLE_EQ(r.lambda_thc, r.lambda_circ);
}

TEST(Hamiltonian, ShiftEquivariantUnderOrbitalPermutation) {
  const std::size_t n = 3;
  const auto H = oracle::random_hamiltonian(n, 2, 4);
  const auto S = oracle::random_shift(n, 4);
  const std::array<std::size_t, 3> perm = {2, 0, 1};
  Eigen::MatrixXd h(n, n), beta(n, n);
  Tensor4 g(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      h(p, q) = H.h()(perm[p], perm[q]);
      beta(p, q) = S.beta(perm[p], perm[q]);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) g(p, q, r, s) = H.g()(perm[p], perm[q], perm[r], perm[s]);
    }
  const ElectronicHamiltonian Hp(h, g, 2, H.core_energy());
  auto Sp = S;
  Sp.beta = beta;
  const auto a = apply_bliss_shift(H, S), b = apply_bliss_shift(Hp, Sp);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      EXPECT_NEAR(b.kappa(p, q), a.kappa(perm[p], perm[q]), 1e-13);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          EXPECT_NEAR(b.g(p, q, r, s), a.g(perm[p], perm[q], perm[r], perm[s]), 1e-13);
    }
}

TEST(Fock, MatchesKroneckerConstruction) {
  for (std::uint64_t seed : {5, 6}) {
    const auto H = oracle::random_hamiltonian(3, 2, seed);
    EXPECT_LT(max_abs(fock_space_matrix(second_quantized(H)) - oracle::hamiltonian_matrix(H)), 1e-12);
  }
}

TEST(Fock, ShiftedOperatorMatchesExplicitShift) {
  const std::size_t n = 3;
  const int eta = 2;
  const auto H = oracle::random_hamiltonian(n, eta, 7);
  const auto S = oracle::random_shift(n, 7);
  const Eigen::MatrixXd N = oracle::number_operator(n);
  const Eigen::Index dim = N.rows();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) B += S.beta(p, q) * oracle::excitation(p, q, n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd expected =
      oracle::hamiltonian_matrix(H) - S.alpha1 * N - 0.5 * S.alpha2 * N * N - 0.5 * B * (N - double(eta) * I);
  EXPECT_LT(max_abs(fock_space_matrix(second_quantized(H, S)) - expected), 1e-10);
}

TEST(Fock, SectorSpectrumShiftsByConstant) {
  for (std::size_t n : {2, 3}) {
    const int eta = int(n);
    const auto H = oracle::random_hamiltonian(n, eta, 8 + n);
    const auto S = oracle::random_shift(n, 8 + n);
    const auto e0 = sector_eigenvalues(fock_space_matrix(second_quantized(H)), n, eta);
    const auto e1 = sector_eigenvalues(fock_space_matrix(second_quantized(H, S)), n, eta);
    const double c = S.alpha1 * eta + 0.5 * S.alpha2 * eta * eta;
    EXPECT_LT((e1 - (e0.array() - c).matrix()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Fock, SizeGuard) {
  SecondQuantizedOperator op{Eigen::MatrixXd::Zero(7, 7), Tensor4(7), 0.0};
  EXPECT_THROW(fock_space_matrix(op), blissthc::SizeLimitError);
}

TEST(Hamiltonian, JsonRoundTrip) {
  const auto H = oracle::random_hamiltonian(2, 2, 9);
  const auto back = hamiltonian_from_json(to_json(H));
  EXPECT_EQ(frobenius_distance(back.g(), H.g()), 0.0);
  EXPECT_EQ(max_abs(back.h() - H.h()), 0.0);
  EXPECT_EQ(back.eta(), 2);
  const auto S = oracle::random_shift(2, 9);
  const auto Sb = shift_from_json(to_json(S));
  EXPECT_EQ(Sb.alpha1, S.alpha1);
  EXPECT_EQ(max_abs(Sb.beta - S.beta), 0.0);
}
