#pragma once

#include "blissthc/tensor.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstddef>

namespace blissthc::tensor_core {

// Spin-summed electronic Hamiltonian in chemist notation:
//   H = E_core + sum_pq h_pq E_pq + 1/2 sum_pqrs g_pqrs (E_pq E_rs - delta_qr E_ps)
// Immutable once constructed; the constructor enforces the invariants.
class ElectronicHamiltonian {
 public:
  ElectronicHamiltonian(Eigen::MatrixXd h, Tensor4 g, int eta, double core_energy = 0.0);

  std::size_t n_spatial() const noexcept { return std::size_t(h_.rows()); }
  const Eigen::MatrixXd& h() const noexcept { return h_; }
  const Tensor4& g() const noexcept { return g_; }
  int eta() const noexcept { return eta_; }
  double core_energy() const noexcept { return core_energy_; }

 private:
  Eigen::MatrixXd h_;
  Tensor4 g_;
  int eta_;
  double core_energy_;
};

struct SymmetryShiftParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  Eigen::MatrixXd beta;

  static SymmetryShiftParams zero(std::size_t n_spatial);
  // Throws DimensionError / DomainError.
  void validate(std::size_t n_spatial) const;
};

struct ShiftedIntegrals {
  Eigen::MatrixXd kappa;  // one-body matrix in the Majorana form
  Tensor4 g;              // shifted two-body tensor
};

enum class LambdaMode { plain, circ };

struct OneNormReport {
  double lambda_plain = 0.0;
  double lambda_circ = 0.0;
  double lambda_thc = 0.0;
  Eigen::VectorXd t_eigenvalues;

  double value(LambdaMode mode) const { return mode == LambdaMode::plain ? lambda_plain : lambda_circ; }
};

// T_pq = h_pq - 1/2 sum_r g_prrq + sum_r g_pqrr
Eigen::MatrixXd one_body_matrix(const ElectronicHamiltonian& H);

ShiftedIntegrals apply_bliss_shift(const ElectronicHamiltonian& H, const SymmetryShiftParams& S);

// lambda      = sum_k |t_k| + 1/2 sum_{mu nu} |zeta_{mu nu}|
// lambda_circ = lambda - 1/4 sum_mu |zeta_{mu mu}|
// t_k are the eigenvalues of one_body. lambda_thc is lambda_circ of the inputs as given;
// pass kappa_BI to obtain the shifted 1-norm.
OneNormReport one_norms(const Eigen::MatrixXd& one_body, const Eigen::MatrixXd& zeta);

nlohmann::json to_json(const ElectronicHamiltonian& H);
ElectronicHamiltonian hamiltonian_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SymmetryShiftParams& S);
SymmetryShiftParams shift_from_json(const nlohmann::json& j);

double max_asymmetry(const Eigen::MatrixXd& m);

}  // namespace blissthc::tensor_core
