#include "blissthc/fock.hpp"

#include "blissthc/errors.hpp"

#include <bit>
#include <cstdint>

namespace blissthc::tensor_core {

SecondQuantizedOperator second_quantized(const ElectronicHamiltonian& H) {
  const auto n = H.n_spatial();
  SecondQuantizedOperator op{H.h(), H.g(), H.core_energy()};
  const auto& g = H.g();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r) op.one_body(Eigen::Index(p), Eigen::Index(q)) -= 0.5 * g(p, r, r, q);
  return op;
}

SecondQuantizedOperator second_quantized(const ElectronicHamiltonian& H, const SymmetryShiftParams& S) {
  S.validate(H.n_spatial());
  auto op = second_quantized(H);
  const auto shifted = apply_bliss_shift(H, S);
  op.two_body = shifted.g;
  const auto n = Eigen::Index(H.n_spatial());
  op.one_body += 0.5 * double(H.eta()) * S.beta - S.alpha1 * Eigen::MatrixXd::Identity(n, n);
  return op;
}

namespace {

using State = std::uint32_t;

// Applies a_mode (create=false) or a+_mode (create=true). Returns false if the result vanishes.
inline bool apply(State& x, unsigned mode, bool create, double& sign) {
  const State bit = State(1) << mode;
  if (bool(x & bit) == create) return false;
  if (std::popcount(x & (bit - 1)) & 1) sign = -sign;
  x ^= bit;
  return true;
}

}  // namespace

Eigen::MatrixXd fock_space_matrix(const SecondQuantizedOperator& op) {
  const auto n = std::size_t(op.one_body.rows());
  if (n > kMaxFockOrbitals) {
    throw SizeLimitError("Fock-space oracle supports at most " + std::to_string(kMaxFockOrbitals) +
                         " spatial orbitals (requested " + std::to_string(n) + ")");
  }
  if (op.one_body.cols() != Eigen::Index(n) || op.two_body.dim() != n) {
    throw DimensionError("operator blocks have inconsistent dimensions");
  }
  const std::size_t dim = std::size_t(1) << (2 * n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(dim), Eigen::Index(dim));
  m.diagonal().setConstant(op.constant);
  auto mode = [n](std::size_t p, int spin) { return unsigned(p + (spin ? n : 0)); };

  for (State x0 = 0; x0 < dim; ++x0) {
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        const double o = op.one_body(Eigen::Index(p), Eigen::Index(q));
        if (o == 0.0) continue;
        for (int sg = 0; sg < 2; ++sg) {
          State x = x0;
          double sign = 1.0;
          if (!apply(x, mode(q, sg), false, sign) || !apply(x, mode(p, sg), true, sign)) continue;
          m(Eigen::Index(x), Eigen::Index(x0)) += sign * o;
        }
      }
    // 1/2 sum v_pqrs a+_{p s} a_{q s} a+_{r t} a_{s t}; rightmost acts first.
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s)
        for (int tg = 0; tg < 2; ++tg) {
          State x1 = x0;
          double sign1 = 1.0;
          if (!apply(x1, mode(s, tg), false, sign1) || !apply(x1, mode(r, tg), true, sign1)) continue;
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
              const double v = op.two_body(p, q, r, s);
              if (v == 0.0) continue;
              for (int sg = 0; sg < 2; ++sg) {
                State x = x1;
                double sign = sign1;
                if (!apply(x, mode(q, sg), false, sign) || !apply(x, mode(p, sg), true, sign)) continue;
                m(Eigen::Index(x), Eigen::Index(x0)) += 0.5 * sign * v;
              }
            }
        }
  }
  return m;
}

Eigen::MatrixXd number_operator_matrix(std::size_t n_spatial) {
  if (n_spatial > kMaxFockOrbitals) throw SizeLimitError("Fock-space oracle size limit exceeded");
  const std::size_t dim = std::size_t(1) << (2 * n_spatial);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(dim), Eigen::Index(dim));
  for (std::size_t x = 0; x < dim; ++x) m(Eigen::Index(x), Eigen::Index(x)) = std::popcount(State(x));
  return m;
}

std::vector<Eigen::Index> sector_indices(std::size_t n_spatial, int n_electrons) {
  std::vector<Eigen::Index> idx;
  const std::size_t dim = std::size_t(1) << (2 * n_spatial);
  for (std::size_t x = 0; x < dim; ++x)
    if (std::popcount(State(x)) == n_electrons) idx.push_back(Eigen::Index(x));
  return idx;
}

Eigen::MatrixXd sector_block(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx) {
  const auto k = Eigen::Index(idx.size());
  Eigen::MatrixXd b(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) b(i, j) = m(idx[std::size_t(i)], idx[std::size_t(j)]);
  return b;
}

Eigen::VectorXd sector_eigenvalues(const Eigen::MatrixXd& m, std::size_t n_spatial, int n_electrons) {
  const auto block = sector_block(m, sector_indices(n_spatial, n_electrons));
  if (block.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace blissthc::tensor_core
