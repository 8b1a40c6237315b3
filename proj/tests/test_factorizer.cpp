#include "oracles.hpp"

#include <blissthc/errors.hpp>
#include <blissthc/factorizer.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace blissthc;
using bliss::ParameterLayout;
using bliss::ThcFactorization;

namespace {

Eigen::VectorXd random_point(const ParameterLayout& L, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(L.size());
  for (auto& v : x) v = u(rng);
  return x;
}

// 1/2 ||g_BI - zeta chi^4||^2 + rho (sum |t| + sum_{mu<nu} |zeta| + 1/4 sum |zeta_mumu|), from scratch.
double reference_cost(const tensor_core::ElectronicHamiltonian& H, const ThcFactorization& F, double rho) {
  const auto s = tensor_core::apply_bliss_shift(H, F.shift);
  const std::size_t n = H.n_spatial(), M = F.rank();
  Eigen::MatrixXd chi = F.chi;
  for (Eigen::Index m = 0; m < chi.rows(); ++m) chi.row(m).normalize();
  double r2 = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t t = 0; t < n; ++t) {
          double v = 0.0;
          for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = 0; b < M; ++b) v += F.zeta(a, b) * chi(a, p) * chi(a, q) * chi(b, r) * chi(b, t);
          r2 += std::pow(s.g(p, q, r, t) - v, 2);
        }
  double pen = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s.kappa).eigenvalues().cwiseAbs().sum();
  for (std::size_t a = 0; a < M; ++a) {
    pen += 0.25 * std::abs(F.zeta(a, a));
    for (std::size_t b = a + 1; b < M; ++b) pen += std::abs(F.zeta(a, b));
  }
  return 0.5 * r2 + rho * pen;
}

}  // namespace

TEST(Factorizer, ZeroFactorizationCostIsHalfNormSquared) {
  const auto H = oracle::random_hamiltonian(3, 2, 31);
  ThcFactorization F{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 3), tensor_core::SymmetryShiftParams::zero(3)};
  F.chi.col(0).setOnes();
  const double g2 = std::pow(tensor_core::frobenius_norm(H.g()), 2);
  EXPECT_NEAR(bliss::cost(H, F, 0.0), 0.5 * g2, 1e-12);
}

TEST(Factorizer, CostMatchesReference) {
  const auto H = oracle::random_hamiltonian(3, 2, 32);
  const ParameterLayout L{4, 3};
  const auto F = L.unpack(random_point(L, 32));
  EXPECT_NEAR(bliss::cost(H, F, 0.3), reference_cost(H, F, 0.3), 1e-10);
}

TEST(Factorizer, GradientMatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto H = oracle::random_hamiltonian(3, 2, 40 + seed);
    const ParameterLayout L{3 + seed % 2, 3};
    const Eigen::VectorXd x = random_point(L, seed);
    Eigen::VectorXd g;
    bliss::cost_and_gradient(H, L, x, 0.05, g);
    const auto num = oracle::numeric_gradient(
        [&](const Eigen::VectorXd& y) { return reference_cost(H, L.unpack(y), 0.05); }, x, 1e-6);
    EXPECT_LT((g - num).norm() / num.norm(), 1e-6) << "seed " << seed;
  }
}

TEST(Factorizer, ShiftFreeLayoutEqualsThcCost) {
  const auto H = oracle::random_hamiltonian(2, 2, 33);
  const ParameterLayout L{2, 2};
  Eigen::VectorXd x = random_point(L, 33);
  x.tail(L.size() - L.shift_offset()).setZero();
  const auto F = L.unpack(x);
  const double direct = 0.5 * std::pow(tensor_core::frobenius_distance(H.g(), bliss::reconstruct_g(F)), 2);
  EXPECT_NEAR(bliss::cost(H, F, 0.0), direct, 1e-12);
}

TEST(Factorizer, PackUnpackRoundTrip) {
  const ParameterLayout L{3, 4};
  const Eigen::VectorXd x = random_point(L, 34);
  EXPECT_EQ((L.pack(L.unpack(x)) - x).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Factorizer, RankOneExactOnSeparableTensor) {
  const Eigen::VectorXd v = oracle::random_unit(3, 35);
  const tensor_core::ElectronicHamiltonian H(Eigen::MatrixXd::Identity(3, 3), oracle::separable(v, 0.8), 2);
  bliss::FactorizationConfig cfg;
  cfg.optimize_shift = false;
  const auto [F, rep] = bliss::optimize(H, 1, cfg);
  EXPECT_LE(rep.l2_error, 1e-8);
  EXPECT_NEAR(std::abs(F.chi.row(0).dot(v.transpose())), 1.0, 1e-8);
}

TEST(Factorizer, FullRankExact) {
  const auto H = oracle::random_hamiltonian(3, 2, 36);
  bliss::FactorizationConfig cfg;
  cfg.optimize_shift = false;
  EXPECT_LE(bliss::optimize(H, 9, cfg).second.l2_error, 1e-6);
}

TEST(Factorizer, RankSweepErrorDoesNotIncrease) {
  const auto H = oracle::random_hamiltonian(3, 2, 37);
  bliss::FactorizationConfig cfg;
  cfg.max_iterations = 400;
  const auto rows = bliss::rank_sweep(H, {2, 3, 4, 6}, cfg);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].report.l2_error, rows[i - 1].report.l2_error * (1 + 1e-9));
  EXPECT_THROW(bliss::rank_sweep(H, {3, 2}, cfg), Error);
}

TEST(Factorizer, SameSeedSameResult) {
  const auto H = oracle::random_hamiltonian(3, 2, 38);
  bliss::FactorizationConfig cfg;
  cfg.max_iterations = 200;
  cfg.rho = 1e-3;
  const auto a = bliss::optimize(H, 4, cfg).first, b = bliss::optimize(H, 4, cfg).first;
  EXPECT_EQ(bliss::to_json(a).dump(), bliss::to_json(b).dump());
}

TEST(Factorizer, RegularizationLowersOneNorm) {
  const auto H = oracle::random_hamiltonian(3, 2, 39);
  bliss::FactorizationConfig cfg;
  cfg.max_iterations = 500;
  const auto path = bliss::regularization_path(H, 5, {0.0, 1e-2, 1e-1}, cfg);
  ASSERT_EQ(path.size(), 3u);
  EXPECT_LE(path.back().report.lambda_thc, path.front().report.lambda_thc);
  EXPECT_GE(path.back().report.l2_error, path.front().report.l2_error);
}

TEST(Factorizer, ValidateRejectsNonUnitChi) {
  ThcFactorization F{Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Constant(1, 2, 1.0),
                     tensor_core::SymmetryShiftParams::zero(2)};
  EXPECT_THROW(F.validate(), Error);
}

TEST(Factorizer, JsonRoundTripAndCsv) {
  const auto H = oracle::random_hamiltonian(2, 2, 40);
  bliss::FactorizationConfig cfg;
  cfg.max_iterations = 50;
  const auto rows = bliss::rank_sweep(H, {2}, cfg);
  const auto j = bliss::to_json(rows[0].factorization);
  EXPECT_EQ(bliss::to_json(bliss::factorization_from_json(j)).dump(), j.dump());
  EXPECT_EQ(bliss::rank_sweep_csv_header(), "M,l2_error,lambda_thc,iterations,converged");
  EXPECT_EQ(bliss::rank_sweep_csv_row(rows[0]).substr(0, 2), "2,");
}

TEST(Factorizer, PadRankKeepsReconstruction) {
  const auto H = oracle::random_hamiltonian(3, 2, 41);
  bliss::FactorizationConfig cfg;
  cfg.max_iterations = 100;
  const auto F = bliss::optimize(H, 3, cfg).first;
  const auto P = bliss::pad_rank(F, 5, 7);
  EXPECT_EQ(P.rank(), 5u);
  EXPECT_LT(tensor_core::frobenius_distance(bliss::reconstruct_g(F), bliss::reconstruct_g(P)), 1e-12);
}
