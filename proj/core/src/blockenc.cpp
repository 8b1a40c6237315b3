#include "blissthc/blockenc.hpp"

#include "blissthc/errors.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace blissthc::blockenc {

namespace {

void check_size(std::size_t n) {
  if (n < 1) throw DimensionError("need at least one orbital");
  if (n > kMaxOrbitals) throw SizeLimitError("operator-level verification is limited to 4 spatial orbitals");
}

// cos(phi) I + sin(phi) (i P) for P = A_a B_b with {A,B} = {X,Y}. iP is real in this basis.
// y_on_b selects X_a Y_b (true) or Y_a X_b (false).
Eigen::MatrixXd pauli_rotation(std::size_t a, std::size_t b, bool y_on_b, double phi, std::size_t n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  const std::size_t mask = (std::size_t(1) << a) | (std::size_t(1) << b);
  const std::size_t ybit = y_on_b ? b : a;
  Eigen::MatrixXd m = std::cos(phi) * Eigen::MatrixXd::Identity(dim, dim);
  const double s = std::sin(phi);
  for (Eigen::Index col = 0; col < dim; ++col) {
    // Y|0> = i|1>, Y|1> = -i|0>; the extra i from the exponent makes the entry -(-1)^bit
    const bool bit = (std::size_t(col) >> ybit) & 1U;
    m(Eigen::Index(std::size_t(col) ^ mask), col) += s * (bit ? 1.0 : -1.0);
  }
  return m;
}

}  // namespace

EncodedCoefficients assemble_coefficients(const Eigen::VectorXd& t, const Eigen::MatrixXd& zeta, double lambda_thc) {
  if (!(lambda_thc > 0.0)) throw DomainError("lambda_thc must be positive");
  const auto M = zeta.rows(), n = t.size();
  if (zeta.cols() != M) throw DimensionError("zeta must be square");
  EncodedCoefficients E;
  E.M = std::size_t(M);
  E.n_spatial = std::size_t(n);
  E.lambda_thc = lambda_thc;
  E.zeta_hat = Eigen::MatrixXd::Zero(std::max(M, n), M + 1);
  for (Eigen::Index k = 0; k < n; ++k) E.zeta_hat(k, M) = -t(k) / lambda_thc;
  for (Eigen::Index nu = 0; nu < M; ++nu) {
    E.zeta_hat(nu, nu) = zeta(nu, nu) / (4.0 * lambda_thc);
    for (Eigen::Index mu = 0; mu < nu; ++mu) E.zeta_hat(mu, nu) = zeta(mu, nu) / lambda_thc;
  }
  return E;
}

BlockEncodingInstance BlockEncodingInstance::from_factorization(const bliss::ElectronicHamiltonian& H,
                                                                const bliss::ThcFactorization& F) {
  F.validate();
  const auto n = Eigen::Index(H.n_spatial()), M = Eigen::Index(F.rank());
  const auto shifted = tensor_core::apply_bliss_shift(H, F.shift);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shifted.kappa);
  BlockEncodingInstance inst;
  inst.n_spatial = std::size_t(n);
  inst.M = std::size_t(M);
  inst.t = es.eigenvalues();
  inst.zeta = F.zeta;
  inst.theta.resize(M, n - 1);
  inst.phi.resize(n, n - 1);
  for (Eigen::Index mu = 0; mu < M; ++mu) inst.theta.row(mu) = quant::chi_to_angles(F.chi.row(mu).transpose()).transpose();
  for (Eigen::Index k = 0; k < n; ++k) inst.phi.row(k) = quant::chi_to_angles(es.eigenvectors().col(k)).transpose();
  inst.lambda_thc = tensor_core::one_norms(shifted.kappa, F.zeta).lambda_circ;
  return inst;
}

BlockEncodingInstance BlockEncodingInstance::from_quantized(const quant::QuantizedEncoding& Q) {
  Q.validate();
  BlockEncodingInstance inst;
  inst.n_spatial = Q.n_spatial;
  inst.M = Q.M;
  inst.t = Q.t();
  inst.zeta = Q.zeta();
  inst.theta = Q.theta();
  inst.phi = Q.phi();
  inst.lambda_thc = Q.lambda_thc;
  return inst;
}

BlockEncodingInstance BlockEncodingInstance::random(std::size_t n_spatial, std::size_t M, std::uint64_t seed,
                                                    bool one_body_only) {
  check_size(n_spatial);
  if (M < 1 || M > kMaxRank) throw SizeLimitError("operator-level verification is limited to M <= 6");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), angle(0.0, 0.5);
  const auto n = Eigen::Index(n_spatial), m = Eigen::Index(M);
  BlockEncodingInstance inst;
  inst.n_spatial = n_spatial;
  inst.M = M;
  inst.t.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) inst.t(k) = coef(rng);
  inst.zeta = Eigen::MatrixXd::Zero(m, m);
  if (!one_body_only)
    for (Eigen::Index nu = 0; nu < m; ++nu)
      for (Eigen::Index mu = 0; mu <= nu; ++mu) inst.zeta(mu, nu) = inst.zeta(nu, mu) = coef(rng);
  inst.theta.resize(m, n - 1);
  inst.phi.resize(n, n - 1);
  for (Eigen::Index i = 0; i < inst.theta.size(); ++i) inst.theta.data()[i] = angle(rng);
  for (Eigen::Index i = 0; i < inst.phi.size(); ++i) inst.phi.data()[i] = angle(rng);
  inst.lambda_thc = tensor_core::one_norms(inst.t.asDiagonal().toDenseMatrix(), inst.zeta).lambda_circ;
  return inst;
}

Eigen::MatrixXd pauli_z(std::size_t qubit, std::size_t n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  Eigen::VectorXd d(dim);
  for (Eigen::Index b = 0; b < dim; ++b) d(b) = ((std::size_t(b) >> qubit) & 1U) ? -1.0 : 1.0;
  return d.asDiagonal();
}

Eigen::MatrixXd annihilation(std::size_t mode, std::size_t n_modes) {
  const Eigen::Index dim = Eigen::Index(1) << n_modes;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  const std::size_t below = (std::size_t(1) << mode) - 1;
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto ub = std::size_t(b);
    if (!((ub >> mode) & 1U)) continue;
    a(Eigen::Index(ub ^ (std::size_t(1) << mode)), b) = (std::popcount(ub & below) % 2) ? -1.0 : 1.0;
  }
  return a;
}

Eigen::MatrixXd givens_product(const Eigen::VectorXd& angles, std::size_t n_spatial, int sigma) {
  check_size(n_spatial);
  if (std::size_t(angles.size()) + 1 != n_spatial) throw DimensionError("need n_spatial - 1 angles");
  const std::size_t nq = 2 * n_spatial, off = std::size_t(sigma) * n_spatial;
  const Eigen::Index dim = Eigen::Index(1) << nq;
  Eigen::MatrixXd U = Eigen::MatrixXd::Identity(dim, dim);
  for (Eigen::Index k = 0; k < angles.size(); ++k) {
    const double phi = std::numbers::pi * angles(k);
    const std::size_t a = off + std::size_t(k), b = a + 1;
    U = U * pauli_rotation(a, b, true, phi, nq) * pauli_rotation(a, b, false, -phi, nq);
  }
  return U;
}

Eigen::MatrixXd number_reflection(const Eigen::VectorXd& chi, std::size_t n_spatial, int sigma) {
  check_size(n_spatial);
  const std::size_t nq = 2 * n_spatial;
  const Eigen::Index dim = Eigen::Index(1) << nq;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t p = 0; p < n_spatial; ++p)
    c += chi(Eigen::Index(p)) * annihilation(std::size_t(sigma) * n_spatial + p, nq);
  return Eigen::MatrixXd::Identity(dim, dim) - 2.0 * c.transpose() * c;
}

RotatedOperators build_rotated_operators(const BlockEncodingInstance& inst) {
  const std::size_t n = inst.n_spatial;
  check_size(n);
  if (inst.theta.rows() != Eigen::Index(inst.M) || inst.theta.cols() != Eigen::Index(n - 1) ||
      inst.phi.rows() != Eigen::Index(n) || inst.phi.cols() != Eigen::Index(n - 1))
    throw DimensionError("angle matrices have the wrong shape");
  RotatedOperators ops;
  ops.n_spatial = n;
  ops.M = inst.M;
  auto rotate = [&](const Eigen::VectorXd& angles, std::vector<Eigen::MatrixXd>& out) {
    const Eigen::VectorXd chi = quant::angles_to_chi(angles);
    for (int sigma = 0; sigma < 2; ++sigma) {
      const Eigen::MatrixXd U = givens_product(angles, n, sigma);
      Eigen::MatrixXd Zt = U.transpose() * pauli_z(std::size_t(sigma) * n, 2 * n) * U;
      ops.orbital_cross_check =
          std::max(ops.orbital_cross_check, (Zt - number_reflection(chi, n, sigma)).cwiseAbs().maxCoeff());
      out.push_back(std::move(Zt));
    }
  };
  for (std::size_t mu = 0; mu < inst.M; ++mu) rotate(inst.theta.row(Eigen::Index(mu)).transpose(), ops.Z_tilde);
  for (std::size_t k = 0; k < n; ++k) rotate(inst.phi.row(Eigen::Index(k)).transpose(), ops.T_tilde);
  return ops;
}

Eigen::MatrixXd build_h_tilde(const Eigen::VectorXd& t, const Eigen::MatrixXd& zeta, const RotatedOperators& ops) {
  const Eigen::Index dim = ops.dim();
  if (std::size_t(t.size()) != ops.n_spatial || std::size_t(zeta.rows()) != ops.M)
    throw DimensionError("coefficients do not match the rotated operators");
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t k = 0; k < ops.n_spatial; ++k)
    for (int s = 0; s < 2; ++s) H -= 0.5 * t(Eigen::Index(k)) * ops.T(k, s);
  for (std::size_t mu = 0; mu < ops.M; ++mu)
    for (std::size_t nu = 0; nu < ops.M; ++nu) {
      const double z = zeta(Eigen::Index(mu), Eigen::Index(nu));
      if (z == 0.0) continue;
      for (int s = 0; s < 2; ++s)
        for (int u = 0; u < 2; ++u) H += 0.125 * z * ops.Z(mu, s) * ops.Z(nu, u);
    }
  H -= 0.25 * zeta.trace() * Eigen::MatrixXd::Identity(dim, dim);
  return H;
}

Eigen::MatrixXd build_h_prime(const EncodedCoefficients& E, const RotatedOperators& ops) {
  const Eigen::Index dim = ops.dim();
  if (E.M != ops.M || E.n_spatial != ops.n_spatial) throw DimensionError("coefficients do not match the rotated operators");
  const auto M = ops.M;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  // off-diagonal slots carry both orderings of the index pair
  for (std::size_t nu = 0; nu < M; ++nu)
    for (std::size_t mu = 0; mu < nu; ++mu) {
      const double z = E.zeta_hat(Eigen::Index(mu), Eigen::Index(nu));
      if (z == 0.0) continue;
      for (int s = 0; s < 2; ++s)
        for (int u = 0; u < 2; ++u) H += 0.125 * z * (ops.Z(nu, u) * ops.Z(mu, s) + ops.Z(mu, u) * ops.Z(nu, s));
    }
  for (std::size_t nu = 0; nu < M; ++nu) {
    const double z = E.zeta_hat(Eigen::Index(nu), Eigen::Index(nu));
    for (int s = 0; s < 2; ++s) H += 0.5 * z * ops.Z(nu, s) * ops.Z(nu, 1 - s);
  }
  for (std::size_t k = 0; k < ops.n_spatial; ++k)
    for (int s = 0; s < 2; ++s) H += 0.5 * E.zeta_hat(Eigen::Index(k), Eigen::Index(M)) * ops.T(k, s);
  return H;
}

ResidualReport verify_block_encoding(const BlockEncodingInstance& inst, double tolerance,
                                     const std::optional<SlotPerturbation>& corrupt) {
  check_size(inst.n_spatial);
  if (inst.M < 1 || inst.M > kMaxRank) throw SizeLimitError("operator-level verification is limited to M <= 6");
  const auto ops = build_rotated_operators(inst);
  auto E = assemble_coefficients(inst.t, inst.zeta, inst.lambda_thc);
  if (corrupt) {
    if (Eigen::Index(corrupt->row) >= E.zeta_hat.rows() || Eigen::Index(corrupt->col) >= E.zeta_hat.cols())
      throw DimensionError("perturbed slot out of range");
    E.zeta_hat(Eigen::Index(corrupt->row), Eigen::Index(corrupt->col)) += corrupt->delta;
  }
  const Eigen::MatrixXd Ht = build_h_tilde(inst.t, inst.zeta, ops);
  const Eigen::MatrixXd Hp = build_h_prime(E, ops);

  ResidualReport r;
  r.n_spatial = inst.n_spatial;
  r.M = inst.M;
  r.lambda_thc = inst.lambda_thc;
  r.residual = (Hp - Ht / inst.lambda_thc).cwiseAbs().maxCoeff();
  r.tolerance = tolerance;
  r.passed = r.residual <= tolerance;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Ht + Ht.transpose()), Eigen::EigenvaluesOnly);
  r.operator_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  r.norm_bound_holds = r.operator_norm <= inst.lambda_thc * (1.0 + 1e-12);
  r.orbital_cross_check = ops.orbital_cross_check;
  r.perturbed = corrupt.has_value();
  return r;
}

nlohmann::json to_json(const ResidualReport& r) {
  return {{"n_spatial", r.n_spatial},
          {"M", r.M},
          {"lambda_thc", r.lambda_thc},
          {"residual", r.residual},
          {"tolerance", r.tolerance},
          {"passed", r.passed},
          {"operator_norm", r.operator_norm},
          {"norm_bound_holds", r.norm_bound_holds},
          {"orbital_cross_check", r.orbital_cross_check},
          {"perturbed", r.perturbed}};
}

}  // namespace blissthc::blockenc
