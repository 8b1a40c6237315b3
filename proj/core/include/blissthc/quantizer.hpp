#pragma once

#include "blissthc/factorizer.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace blissthc::quant {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// Fixed-point data. All angles and coefficients are stored as integer multiples of their grid
// unit so that serialization is exact.
struct QuantizedEncoding {
  int aleph = 0;
  int beth = 0;
  std::size_t M = 0;
  std::size_t n_spatial = 0;
  double lambda_thc = 0.0;
  double x = 0.0;             // shared offset, in grid units
  std::int64_t deficit = 0;   // target total minus achieved total (0 when feasible)
  IntMatrix theta_units;      // M x (n-1)
  IntMatrix phi_units;        // n x (n-1), one row per one-body eigenvector
  IntMatrix zeta_units;       // M x M; off-diagonal in u0, diagonal in ud
  IntVector t_units;          // n, in u0

  double u_theta() const;
  double u0() const;
  double ud() const;
  std::size_t d_frak() const { return M * (M + 1) / 2 + n_spatial; }

  Eigen::MatrixXd theta() const;
  Eigen::MatrixXd phi() const;
  Eigen::MatrixXd zeta() const;
  Eigen::VectorXd t() const;

  void validate() const;
};

struct ErrorBudget {
  double epsilon_total = 0.0016;
  double epsilon_pea = 0.001;
  double epsilon_thc = 0.0006;
  double epsilon_trunc = 0.0;
  double epsilon_coeff = 0.0;
  double epsilon_rot = 0.0;

  // Splits the remainder of epsilon_total after epsilon_pea into epsilon_thc.
  static ErrorBudget from_total(double total, double pea);
  void validate() const;
};

// Spherical coordinates: chi_p = cos(2 pi th_p) prod_{q<p} sin(2 pi th_q), chi_{n-1} = prod sin.
Eigen::VectorXd chi_to_angles(const Eigen::VectorXd& chi_row);
Eigen::VectorXd angles_to_chi(const Eigen::VectorXd& angles);

std::int64_t angle_units(double theta, int beth);
Eigen::VectorXd round_angles(const Eigen::VectorXd& angles, int beth);

struct ZetaRounding {
  IntMatrix zeta_units;
  IntVector t_units;
  double x = 0.0;
  std::int64_t deficit = 0;
  Eigen::MatrixXd zeta;
  Eigen::VectorXd t;
};

// Rounds zeta (and, since they share the alias-sampling register, the one-body coefficients t)
// with a common offset x in grid units. x is the value closest to zero for which the integer
// weights |units| sum to d_frak * 2^aleph; if no such x exists the closest total is used and the
// shortfall is reported in deficit.
ZetaRounding round_zeta(const Eigen::MatrixXd& zeta, const Eigen::VectorXd& t, int aleph, double lambda_thc,
                        std::size_t M, std::size_t n_spatial);

QuantizedEncoding quantize(const bliss::ElectronicHamiltonian& H, const bliss::ThcFactorization& F, int aleph,
                           int beth);

struct ReconstructedIntegrals {
  Eigen::MatrixXd kappa;
  bliss::Tensor4 g;
  Eigen::MatrixXd chi;  // rebuilt from the rounded angles
};
ReconstructedIntegrals reconstruct_integrals(const QuantizedEncoding& Q);

struct PrecisionPoint {
  int aleph = 0;
  int beth = 0;
  double l2_two_body = 0.0;
  double l2_one_body = 0.0;
  double lambda_change = 0.0;
  double error = 0.0;  // sqrt(l2_two_body^2 + l2_one_body^2)
  double x = 0.0;
  std::int64_t deficit = 0;
};

struct PrecisionGrid {
  std::vector<int> alephs;
  std::vector<int> beths;
  std::vector<PrecisionPoint> points;  // aleph-major

  const PrecisionPoint& at(std::size_t ia, std::size_t ib) const { return points[ia * beths.size() + ib]; }
};

// Errors are measured against the unrounded factorization.
PrecisionGrid precision_grid(const bliss::ElectronicHamiltonian& H, const bliss::ThcFactorization& F,
                             const std::vector<int>& alephs, const std::vector<int>& beths);

std::string precision_grid_csv(const PrecisionGrid& grid);

nlohmann::json to_json(const QuantizedEncoding& Q);
QuantizedEncoding quantized_from_json(const nlohmann::json& j);

}  // namespace blissthc::quant
