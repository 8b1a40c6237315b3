#pragma once

#include "blissthc/factorizer.hpp"
#include "blissthc/quantizer.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace blissthc::blockenc {

inline constexpr std::size_t kMaxOrbitals = 4;
inline constexpr std::size_t kMaxRank = 6;

// Normalized coefficients of the auxiliary state. Row/column layout: entry (mu, nu) with
// mu <= nu < M for two-body slots, column M for one-body slots mu < n_spatial.
struct EncodedCoefficients {
  Eigen::MatrixXd zeta_hat;  // max(M, n) x (M + 1)
  double lambda_thc = 0.0;
  std::size_t M = 0;
  std::size_t n_spatial = 0;

  double weight_sum() const { return zeta_hat.cwiseAbs().sum(); }
};

EncodedCoefficients assemble_coefficients(const Eigen::VectorXd& t, const Eigen::MatrixXd& zeta, double lambda_thc);

// Everything the operator-level construction needs, either exact or rounded.
struct BlockEncodingInstance {
  std::size_t n_spatial = 0;
  std::size_t M = 0;
  Eigen::VectorXd t;      // one-body eigenvalues
  Eigen::MatrixXd zeta;   // M x M
  Eigen::MatrixXd theta;  // M x (n-1) two-body angles
  Eigen::MatrixXd phi;    // n x (n-1) one-body angles
  double lambda_thc = 0.0;

  static BlockEncodingInstance from_factorization(const bliss::ElectronicHamiltonian& H,
                                                  const bliss::ThcFactorization& F);
  static BlockEncodingInstance from_quantized(const quant::QuantizedEncoding& Q);
  // Uniform coefficients in [-1, 1], angles in [0, 1/2). one_body_only zeroes zeta.
  static BlockEncodingInstance random(std::size_t n_spatial, std::size_t M, std::uint64_t seed,
                                      bool one_body_only = false);
};

struct RotatedOperators {
  std::size_t n_spatial = 0;
  std::size_t M = 0;
  std::vector<Eigen::MatrixXd> Z_tilde;  // index 2*mu + sigma
  std::vector<Eigen::MatrixXd> T_tilde;  // index 2*k + sigma
  // max |Givens construction - (1 - 2 c^dag c)| over all rotated operators
  double orbital_cross_check = 0.0;

  Eigen::Index dim() const { return Eigen::Index(1) << (2 * n_spatial); }
  const Eigen::MatrixXd& Z(std::size_t mu, int sigma) const { return Z_tilde[2 * mu + std::size_t(sigma)]; }
  const Eigen::MatrixXd& T(std::size_t k, int sigma) const { return T_tilde[2 * k + std::size_t(sigma)]; }
};

// Qubit layout: spin-up orbitals on qubits 0..n-1, spin-down on n..2n-1; bit q of a basis
// index is qubit q. Product of Givens rotations G_0 G_1 ... G_{n-2} with
// G_k(th) = exp(i pi th X_k Y_{k+1}) exp(-i pi th Y_k X_{k+1}).
Eigen::MatrixXd givens_product(const Eigen::VectorXd& angles, std::size_t n_spatial, int sigma);
// 1 - 2 c^dag c with c = sum_p chi_p a_{p sigma}
Eigen::MatrixXd number_reflection(const Eigen::VectorXd& chi, std::size_t n_spatial, int sigma);
Eigen::MatrixXd annihilation(std::size_t mode, std::size_t n_modes);
Eigen::MatrixXd pauli_z(std::size_t qubit, std::size_t n_qubits);

RotatedOperators build_rotated_operators(const BlockEncodingInstance& inst);

Eigen::MatrixXd build_h_tilde(const Eigen::VectorXd& t, const Eigen::MatrixXd& zeta, const RotatedOperators& ops);
Eigen::MatrixXd build_h_prime(const EncodedCoefficients& E, const RotatedOperators& ops);

struct SlotPerturbation {
  std::size_t row = 0;
  std::size_t col = 0;
  double delta = 0.0;
};

struct ResidualReport {
  std::size_t n_spatial = 0;
  std::size_t M = 0;
  double lambda_thc = 0.0;
  double residual = 0.0;  // max |H' - H~ / lambda|
  double tolerance = 0.0;
  bool passed = false;
  double operator_norm = 0.0;  // ||H~||_2
  bool norm_bound_holds = false;
  double orbital_cross_check = 0.0;
  bool perturbed = false;
};

ResidualReport verify_block_encoding(const BlockEncodingInstance& inst, double tolerance,
                                     const std::optional<SlotPerturbation>& corrupt = std::nullopt);

nlohmann::json to_json(const ResidualReport& r);

}  // namespace blissthc::blockenc
