#pragma once

#include "blissthc/hamiltonian.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blissthc::bliss {

using tensor_core::ElectronicHamiltonian;
using tensor_core::SymmetryShiftParams;
using tensor_core::Tensor4;

struct ThcFactorization {
  Eigen::MatrixXd zeta;  // M x M, symmetric
  Eigen::MatrixXd chi;   // M x n_spatial, unit rows
  SymmetryShiftParams shift;

  std::size_t rank() const noexcept { return std::size_t(zeta.rows()); }
  std::size_t n_spatial() const noexcept { return std::size_t(chi.cols()); }
  // Throws DimensionError / DomainError when the stored invariants do not hold.
  void validate() const;
};

struct FactorizationConfig {
  double rho = 0.0;
  int max_iterations = 2000;
  double gradient_tolerance = 1e-9;
  std::uint64_t seed = 1;
  std::optional<ThcFactorization> warm_start;
  bool optimize_shift = true;
  bool huber = false;
  double huber_width = 1e-8;
  int lbfgs_memory = 20;
  int init_refinement_rounds = 2;

  void validate() const;
};

struct FactorizationReport {
  double l2_error = 0.0;
  double lambda_thc = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct CostOptions {
  bool huber = false;
  double huber_width = 1e-8;
};

// Flat parameter vector: [zeta upper triangle row-major (mu<=nu)] [chi row-major]
// [alpha1 alpha2] [beta upper triangle row-major]. chi enters unnormalized; the cost
// normalizes each row internally.
struct ParameterLayout {
  std::size_t M = 0;
  std::size_t n = 0;

  std::size_t zeta_count() const { return M * (M + 1) / 2; }
  std::size_t chi_offset() const { return zeta_count(); }
  std::size_t shift_offset() const { return chi_offset() + M * n; }
  std::size_t beta_offset() const { return shift_offset() + 2; }
  std::size_t size() const { return beta_offset() + n * (n + 1) / 2; }

  Eigen::VectorXd pack(const ThcFactorization& F) const;
  ThcFactorization unpack(const Eigen::VectorXd& x) const;  // chi rows left unnormalized
};

double cost(const ElectronicHamiltonian& H, const ThcFactorization& F, double rho, const CostOptions& opt = {});
Eigen::VectorXd gradient(const ElectronicHamiltonian& H, const ThcFactorization& F, double rho,
                         const CostOptions& opt = {});
// Cost and gradient over the flat layout; grad resized to layout.size().
double cost_and_gradient(const ElectronicHamiltonian& H, const ParameterLayout& layout, const Eigen::VectorXd& x,
                         double rho, Eigen::VectorXd& grad, const CostOptions& opt = {});

Tensor4 reconstruct_g(const ThcFactorization& F);
FactorizationReport evaluate(const ElectronicHamiltonian& H, const ThcFactorization& F);

ThcFactorization initial_guess(const ElectronicHamiltonian& H, std::size_t M, const FactorizationConfig& cfg);
std::pair<ThcFactorization, FactorizationReport> optimize(const ElectronicHamiltonian& H, std::size_t M,
                                                          const FactorizationConfig& cfg);

struct RankSweepRow {
  std::size_t M = 0;
  FactorizationReport report;
  ThcFactorization factorization;
};
// Ranks must be strictly ascending; each rank warm-starts from the previous one.
std::vector<RankSweepRow> rank_sweep(const ElectronicHamiltonian& H, const std::vector<std::size_t>& ranks,
                                     const FactorizationConfig& cfg);

struct PathPoint {
  double rho = 0.0;
  FactorizationReport report;
  ThcFactorization factorization;
};
// Regularization path over ascending rho. Points are warm-started in order; afterwards every
// rho keeps the candidate of the whole path with the lowest cost at that rho.
std::vector<PathPoint> regularization_path(const ElectronicHamiltonian& H, std::size_t M,
                                           const std::vector<double>& rhos, const FactorizationConfig& cfg);

// Grows a factorization to rank M_new: zeta padded with zeros, new chi rows drawn from seed.
ThcFactorization pad_rank(const ThcFactorization& F, std::size_t M_new, std::uint64_t seed);

nlohmann::json to_json(const ThcFactorization& F);
ThcFactorization factorization_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FactorizationReport& r);
std::string rank_sweep_csv_header();
std::string rank_sweep_csv_row(const RankSweepRow& row);

}  // namespace blissthc::bliss
