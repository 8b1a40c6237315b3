#include "oracles.hpp"

#include <bit>
#include <random>

namespace oracle {

ElectronicHamiltonian random_hamiltonian(std::size_t n, int eta, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd h(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) h(p, q) = h(q, p) = u(rng);
  // pair index over p >= q, then a symmetric supermatrix on pairs
  const std::size_t npair = n * (n + 1) / 2;
  Eigen::MatrixXd V(npair, npair);
  for (std::size_t a = 0; a < npair; ++a)
    for (std::size_t b = 0; b <= a; ++b) V(a, b) = V(b, a) = u(rng);
  auto pair = [](std::size_t p, std::size_t q) { return p >= q ? p * (p + 1) / 2 + q : q * (q + 1) / 2 + p; };
  Tensor4 g(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) g(p, q, r, s) = V(pair(p, q), pair(r, s));
  return ElectronicHamiltonian(h, g, eta, u(rng));
}

SymmetryShiftParams random_shift(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  SymmetryShiftParams s;
  s.alpha1 = u(rng);
  s.alpha2 = u(rng);
  s.beta.resize(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) s.beta(p, q) = s.beta(q, p) = u(rng);
  return s;
}

Eigen::VectorXd random_unit(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = nd(rng);
  return v.normalized();
}

Tensor4 separable(const Eigen::VectorXd& x, double c) {
  const auto n = std::size_t(x.size());
  Tensor4 g(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) g(p, q, r, s) = c * x(p) * x(q) * x(r) * x(s);
  return g;
}

Eigen::MatrixXd annihilator(std::size_t mode, std::size_t n_modes) {
  Eigen::Matrix2d Z, I, lower;
  Z << 1, 0, 0, -1;
  I.setIdentity();
  lower << 0, 1, 0, 0;  // |0><1|
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
  // kron(A_{N-1}, ..., A_0): qubit 0 is the least significant bit
  for (std::size_t q = n_modes; q-- > 0;) {
    const Eigen::Matrix2d& A = q < mode ? Z : (q == mode ? lower : I);
    Eigen::MatrixXd next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * A;
    m = next;
  }
  return m;
}

Eigen::MatrixXd excitation(std::size_t p, std::size_t q, std::size_t n) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(Eigen::Index(1) << (2 * n), Eigen::Index(1) << (2 * n));
  for (std::size_t sigma = 0; sigma < 2; ++sigma)
    e += annihilator(p + sigma * n, 2 * n).transpose() * annihilator(q + sigma * n, 2 * n);
  return e;
}

Eigen::MatrixXd number_operator(std::size_t n) {
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(Eigen::Index(1) << (2 * n), Eigen::Index(1) << (2 * n));
  for (std::size_t p = 0; p < n; ++p) N += excitation(p, p, n);
  return N;
}

Eigen::MatrixXd hamiltonian_matrix(const ElectronicHamiltonian& H) {
  const std::size_t n = H.n_spatial();
  const Eigen::Index dim = Eigen::Index(1) << (2 * n);
  std::vector<Eigen::MatrixXd> E(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) E[p * n + q] = excitation(p, q, n);
  Eigen::MatrixXd m = H.core_energy() * Eigen::MatrixXd::Identity(dim, dim);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) m += H.h()(p, q) * E[p * n + q];
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = H.g()(p, q, r, s);
          if (v == 0.0) continue;
          m += 0.5 * v * (E[p * n + q] * E[r * n + s]);
          if (q == r) m -= 0.5 * v * E[p * n + s];
        }
  return m;
}

std::vector<Eigen::Index> sector(std::size_t n, int eta) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index b = 0; b < (Eigen::Index(1) << (2 * n)); ++b)
    if (std::popcount(std::uint64_t(b)) == eta) idx.push_back(b);
  return idx;
}

Eigen::VectorXd sector_spectrum(const Eigen::MatrixXd& m, std::size_t n, int eta) {
  const auto idx = sector(n, eta);
  Eigen::MatrixXd block(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) block(i, j) = m(idx[i], idx[j]);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(block, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace oracle
