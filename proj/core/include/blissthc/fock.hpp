#pragma once

#include "blissthc/hamiltonian.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace blissthc::tensor_core {

// H = constant + sum_pq o_pq E_pq + 1/2 sum_pqrs v_pqrs E_pq E_rs,
// with E_pq = sum_sigma a+_{p sigma} a_{q sigma}.
struct SecondQuantizedOperator {
  Eigen::MatrixXd one_body;
  Tensor4 two_body;
  double constant = 0.0;
};

SecondQuantizedOperator second_quantized(const ElectronicHamiltonian& H);
SecondQuantizedOperator second_quantized(const ElectronicHamiltonian& H, const SymmetryShiftParams& S);

inline constexpr std::size_t kMaxFockOrbitals = 6;

// Dense Jordan-Wigner matrix over the full Fock space (dimension 4^n).
// Spin orbital (p, up) is mode p, (p, down) is mode n + p; bit i of a basis index
// is the occupation of mode i. Throws SizeLimitError for n > 6.
Eigen::MatrixXd fock_space_matrix(const SecondQuantizedOperator& op);
Eigen::MatrixXd number_operator_matrix(std::size_t n_spatial);

std::vector<Eigen::Index> sector_indices(std::size_t n_spatial, int n_electrons);
Eigen::MatrixXd sector_block(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx);
Eigen::VectorXd sector_eigenvalues(const Eigen::MatrixXd& m, std::size_t n_spatial, int n_electrons);

}  // namespace blissthc::tensor_core
