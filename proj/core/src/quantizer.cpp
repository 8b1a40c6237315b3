#include "blissthc/quantizer.hpp"

#include "blissthc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace blissthc::quant {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_bits(int bits, const char* what) {
  if (bits < 1 || bits > 52) throw DomainError(std::string(what) + " must lie in [1, 52]");
}

double lambda_circ(const Eigen::VectorXd& t, const Eigen::MatrixXd& zeta) {
  double s = t.cwiseAbs().sum();
  for (Eigen::Index i = 0; i < zeta.rows(); ++i) {
    s += 0.25 * std::abs(zeta(i, i));
    for (Eigen::Index j = i + 1; j < zeta.cols(); ++j) s += std::abs(zeta(i, j));
  }
  return s;
}

std::int64_t round_half_up(double v) { return std::int64_t(std::floor(v + 0.5)); }

}  // namespace

double QuantizedEncoding::u_theta() const { return std::ldexp(1.0, -(beth + 1)); }
double QuantizedEncoding::u0() const { return lambda_thc / std::ldexp(double(d_frak()), aleph); }
double QuantizedEncoding::ud() const { return 4.0 * u0(); }

Eigen::MatrixXd QuantizedEncoding::theta() const { return theta_units.cast<double>() * u_theta(); }
Eigen::MatrixXd QuantizedEncoding::phi() const { return phi_units.cast<double>() * u_theta(); }
Eigen::VectorXd QuantizedEncoding::t() const { return t_units.cast<double>() * u0(); }

Eigen::MatrixXd QuantizedEncoding::zeta() const {
  Eigen::MatrixXd z = zeta_units.cast<double>() * u0();
  z.diagonal() = zeta_units.diagonal().cast<double>() * ud();
  return z;
}

void QuantizedEncoding::validate() const {
  check_bits(aleph, "aleph");
  check_bits(beth, "beth");
  const auto m = Eigen::Index(M), n = Eigen::Index(n_spatial);
  if (n < 1 || m < 1) throw DimensionError("empty encoding");
  if (theta_units.rows() != m || theta_units.cols() != n - 1 || phi_units.rows() != n ||
      phi_units.cols() != n - 1 || zeta_units.rows() != m || zeta_units.cols() != m || t_units.size() != n)
    throw DimensionError("encoding matrices have inconsistent shapes");
  if (!(lambda_thc > 0.0) || !std::isfinite(lambda_thc)) throw DomainError("lambda_thc must be positive");
  const std::int64_t top = std::int64_t(1) << beth;
  auto in_range = [top](std::int64_t k) { return k >= 0 && k < top; };
  for (Eigen::Index i = 0; i < theta_units.size(); ++i)
    if (!in_range(theta_units.data()[i])) throw DomainError("angle outside [0, 1/2)");
  for (Eigen::Index i = 0; i < phi_units.size(); ++i)
    if (!in_range(phi_units.data()[i])) throw DomainError("angle outside [0, 1/2)");
  if (zeta_units != zeta_units.transpose()) throw DomainError("zeta units not symmetric");
}

ErrorBudget ErrorBudget::from_total(double total, double pea) {
  ErrorBudget b;
  b.epsilon_total = total;
  b.epsilon_pea = pea;
  b.epsilon_thc = total - pea;
  b.validate();
  return b;
}

void ErrorBudget::validate() const {
  for (double v : {epsilon_total, epsilon_pea, epsilon_thc, epsilon_trunc, epsilon_coeff, epsilon_rot})
    if (!(v >= 0.0)) throw DomainError("error budget entries must be non-negative");
  if (epsilon_pea + epsilon_thc > epsilon_total * (1.0 + 1e-12))
    throw DomainError("epsilon_pea + epsilon_thc exceeds epsilon_total");
  if (epsilon_trunc + epsilon_coeff + epsilon_rot > epsilon_thc * (1.0 + 1e-12))
    throw DomainError("THC error components exceed epsilon_thc");
}

Eigen::VectorXd chi_to_angles(const Eigen::VectorXd& chi_row) {
  const auto n = chi_row.size();
  if (n < 1) throw DimensionError("empty chi row");
  if (std::abs(chi_row.norm() - 1.0) > 1e-10) throw DomainError("chi row is not unit norm");
  Eigen::VectorXd v = chi_row;
  for (Eigen::Index p = n - 1; p >= 0; --p)
    if (v(p) != 0.0) {
      if (v(p) < 0.0) v = -v;
      break;
    }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n - 1);
  // tail(p) = || v_{p..} ||, accumulated from the back to avoid cancellation
  Eigen::VectorXd tail(n + 1);
  tail(n) = 0.0;
  for (Eigen::Index p = n - 1; p >= 0; --p) tail(p) = std::hypot(tail(p + 1), v(p));
  for (Eigen::Index p = 0; p + 1 < n; ++p) {
    if (tail(p) == 0.0) break;
    double th = std::atan2(tail(p + 1), v(p)) / two_pi;
    out(p) = std::min(th, 0.5);
  }
  return out;
}

Eigen::VectorXd angles_to_chi(const Eigen::VectorXd& angles) {
  const auto n = angles.size() + 1;
  Eigen::VectorXd chi(n);
  double s = 1.0;
  for (Eigen::Index p = 0; p + 1 < n; ++p) {
    const double th = angles(p);
    if (!(th >= 0.0 && th <= 0.5)) throw DomainError("angle outside [0, 1/2]");
    chi(p) = s * std::cos(two_pi * th);
    s *= std::sin(two_pi * th);
  }
  chi(n - 1) = s;
  return chi;
}

std::int64_t angle_units(double theta, int beth) {
  check_bits(beth, "beth");
  if (!(theta >= 0.0 && theta <= 0.5)) throw DomainError("angle outside [0, 1/2]");
  const std::int64_t top = std::int64_t(1) << beth;
  // the grid point 1/2 (rotation by pi) is excluded; it wraps to the last representable value
  return std::min(round_half_up(std::ldexp(theta, beth + 1)), top - 1);
}

Eigen::VectorXd round_angles(const Eigen::VectorXd& angles, int beth) {
  Eigen::VectorXd out(angles.size());
  for (Eigen::Index i = 0; i < angles.size(); ++i) out(i) = std::ldexp(double(angle_units(angles(i), beth)), -(beth + 1));
  return out;
}

ZetaRounding round_zeta(const Eigen::MatrixXd& zeta, const Eigen::VectorXd& t, int aleph, double lambda_thc,
                        std::size_t M, std::size_t n_spatial) {
  check_bits(aleph, "aleph");
  const auto m = Eigen::Index(M), n = Eigen::Index(n_spatial);
  if (zeta.rows() != m || zeta.cols() != m || t.size() != n) throw DimensionError("round_zeta shape mismatch");
  if (!(lambda_thc > 0.0) || !std::isfinite(lambda_thc)) throw DomainError("lambda_thc must be positive");
  if (tensor_core::max_asymmetry(zeta) > 1e-12 * std::max(1.0, zeta.cwiseAbs().maxCoeff()))
    throw DomainError("zeta is not symmetric");

  const std::size_t d = M * (M + 1) / 2 + n_spatial;
  const double u0 = lambda_thc / std::ldexp(double(d), aleph);
  const double ud = 4.0 * u0;
  const std::int64_t target = std::int64_t(d) << aleph;

  // slot values in grid units: upper triangle (off-diagonal in u0, diagonal in ud), then t
  std::vector<double> v;
  v.reserve(d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) v.push_back(i == j ? zeta(i, i) / ud : zeta(i, j) / u0);
  for (Eigen::Index k = 0; k < n; ++k) v.push_back(t(k) / u0);

  auto total_at = [&](double x) {
    std::int64_t s = 0;
    for (double vi : v) s += std::abs(round_half_up(vi + x));
    return s;
  };

  // f(x) = sum |round(v_i + x)| is piecewise constant with jumps at x = k - 1/2 - v_i.
  // Scan windows [-L, L] of growing width and take the feasible point nearest zero.
  double best_x = 0.0;
  std::int64_t best_gap = std::llabs(total_at(0.0) - target);
  if (best_gap != 0) {
    double sum_abs = 0.0;
    for (double vi : v) sum_abs += std::abs(vi);
    const double L_max = (double(target) + sum_abs) / double(d) + 2.0;
    const double max_events = 5e7;
    bool found = false;
    for (double L = 1.0; !found; L *= 2.0) {
      L = std::min(L, L_max);
      if (double(d) * 2.0 * L > max_events) break;
      std::vector<std::pair<double, std::size_t>> events;
      std::vector<std::int64_t> r(v.size());
      std::int64_t f = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        r[i] = round_half_up(v[i] - L);
        f += std::abs(r[i]);
        for (double k = std::floor(v[i] - L + 0.5) + 1.0; k - 0.5 - v[i] < L; k += 1.0)
          events.emplace_back(k - 0.5 - v[i], i);
      }
      std::sort(events.begin(), events.end());
      double best_dist = INFINITY;
      auto consider = [&](double a, double b, std::int64_t fv) {
        const std::int64_t gap = std::llabs(fv - target);
        const double delta = std::min(1e-9, (b - a) / 4.0);
        const double xc = std::clamp(0.0, a + delta, b - delta);
        if (gap < best_gap || (gap == best_gap && std::abs(xc) < best_dist)) {
          best_gap = gap;
          best_x = xc;
          best_dist = std::abs(xc);
        }
      };
      double a = -L;
      for (std::size_t e = 0; e < events.size();) {
        const double xb = events[e].first;
        consider(a, xb, f);
        while (e < events.size() && events[e].first == xb) {
          auto& ri = r[events[e].second];
          f += std::abs(ri + 1) - std::abs(ri);
          ++ri;
          ++e;
        }
        a = xb;
      }
      consider(a, L, f);
      found = best_gap == 0 || L >= L_max;
    }
  }

  ZetaRounding out;
  out.x = best_x;
  out.zeta_units = IntMatrix::Zero(m, m);
  out.t_units = IntVector::Zero(n);
  std::size_t s = 0;
  std::int64_t total = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) {
      const auto k = round_half_up(v[s++] + best_x);
      out.zeta_units(i, j) = out.zeta_units(j, i) = k;
      total += std::abs(k);
    }
  for (Eigen::Index k = 0; k < n; ++k) {
    out.t_units(k) = round_half_up(v[s++] + best_x);
    total += std::abs(out.t_units(k));
  }
  out.deficit = target - total;
  out.zeta = out.zeta_units.cast<double>() * u0;
  out.zeta.diagonal() = out.zeta_units.diagonal().cast<double>() * ud;
  out.t = out.t_units.cast<double>() * u0;
  return out;
}

QuantizedEncoding quantize(const bliss::ElectronicHamiltonian& H, const bliss::ThcFactorization& F, int aleph,
                           int beth) {
  check_bits(aleph, "aleph");
  check_bits(beth, "beth");
  F.validate();
  const auto n = Eigen::Index(H.n_spatial());
  if (Eigen::Index(F.n_spatial()) != n) throw DimensionError("factorization does not match the Hamiltonian");
  const auto M = Eigen::Index(F.rank());

  const auto shifted = tensor_core::apply_bliss_shift(H, F.shift);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shifted.kappa);
  const Eigen::VectorXd t = es.eigenvalues();
  const double lambda = lambda_circ(t, F.zeta);
  if (!(lambda > 0.0)) throw DomainError("lambda_thc vanishes; nothing to encode");

  QuantizedEncoding Q;
  Q.aleph = aleph;
  Q.beth = beth;
  Q.M = std::size_t(M);
  Q.n_spatial = std::size_t(n);
  Q.lambda_thc = lambda;
  Q.theta_units.resize(M, n - 1);
  Q.phi_units.resize(n, n - 1);
  for (Eigen::Index mu = 0; mu < M; ++mu) {
    const Eigen::VectorXd a = chi_to_angles(F.chi.row(mu).transpose().normalized());
    for (Eigen::Index p = 0; p + 1 < n; ++p) Q.theta_units(mu, p) = angle_units(a(p), beth);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::VectorXd a = chi_to_angles(es.eigenvectors().col(k));
    for (Eigen::Index p = 0; p + 1 < n; ++p) Q.phi_units(k, p) = angle_units(a(p), beth);
  }
  auto zr = round_zeta(F.zeta, t, aleph, lambda, Q.M, Q.n_spatial);
  Q.zeta_units = std::move(zr.zeta_units);
  Q.t_units = std::move(zr.t_units);
  Q.x = zr.x;
  Q.deficit = zr.deficit;
  return Q;
}

ReconstructedIntegrals reconstruct_integrals(const QuantizedEncoding& Q) {
  Q.validate();
  const auto n = Eigen::Index(Q.n_spatial), M = Eigen::Index(Q.M);
  const Eigen::MatrixXd theta = Q.theta(), phi = Q.phi();
  ReconstructedIntegrals out;
  out.chi.resize(M, n);
  for (Eigen::Index mu = 0; mu < M; ++mu) out.chi.row(mu) = angles_to_chi(theta.row(mu).transpose()).transpose();

  bliss::ThcFactorization F;
  F.zeta = Q.zeta();
  F.chi = out.chi;
  out.g = bliss::reconstruct_g(F);

  const Eigen::VectorXd t = Q.t();
  out.kappa = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::VectorXd vk = angles_to_chi(phi.row(k).transpose());
    out.kappa += t(k) * vk * vk.transpose();
  }
  return out;
}

PrecisionGrid precision_grid(const bliss::ElectronicHamiltonian& H, const bliss::ThcFactorization& F,
                             const std::vector<int>& alephs, const std::vector<int>& beths) {
  if (alephs.empty() || beths.empty()) throw DomainError("precision grid ranges must be non-empty");
  const auto g_ref = bliss::reconstruct_g(F);
  const Eigen::MatrixXd kappa_ref = tensor_core::apply_bliss_shift(H, F.shift).kappa;

  PrecisionGrid grid;
  grid.alephs = alephs;
  grid.beths = beths;
  grid.points.resize(alephs.size() * beths.size());
  for (std::size_t ia = 0; ia < alephs.size(); ++ia)
    for (std::size_t ib = 0; ib < beths.size(); ++ib) {
      const auto Q = quantize(H, F, alephs[ia], beths[ib]);
      const auto rec = reconstruct_integrals(Q);
      PrecisionPoint& p = grid.points[ia * beths.size() + ib];
      p.aleph = alephs[ia];
      p.beth = beths[ib];
      p.l2_two_body = tensor_core::frobenius_distance(rec.g, g_ref);
      p.l2_one_body = (rec.kappa - kappa_ref).norm();
      p.lambda_change = lambda_circ(Q.t(), Q.zeta()) - Q.lambda_thc;
      p.error = std::hypot(p.l2_two_body, p.l2_one_body);
      p.x = Q.x;
      p.deficit = Q.deficit;
    }
  return grid;
}

std::string precision_grid_csv(const PrecisionGrid& grid) {
  std::ostringstream s;
  s << "aleph,beth,l2_two_body,l2_one_body,lambda_change,error,x,deficit\n" << std::setprecision(17);
  for (const auto& p : grid.points)
    s << p.aleph << ',' << p.beth << ',' << p.l2_two_body << ',' << p.l2_one_body << ',' << p.lambda_change << ','
      << p.error << ',' << p.x << ',' << p.deficit << '\n';
  return s.str();
}

namespace {

nlohmann::json int_rows(const IntMatrix& m) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::int64_t> row(std::size_t(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[std::size_t(j)] = m(i, j);
    out.push_back(row);
  }
  return out;
}

IntMatrix int_matrix(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || Eigen::Index(j.size()) != rows) throw SchemaError("integer matrix has wrong row count");
  IntMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = j[std::size_t(i)].get<std::vector<std::int64_t>>();
    if (Eigen::Index(row.size()) != cols) throw SchemaError("integer matrix has wrong column count");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[std::size_t(c)];
  }
  return m;
}

}  // namespace

nlohmann::json to_json(const QuantizedEncoding& Q) {
  return {{"schema", "blissthc.quantized_encoding"},
          {"version", 1},
          {"aleph", Q.aleph},
          {"beth", Q.beth},
          {"M", Q.M},
          {"n_spatial", Q.n_spatial},
          {"lambda_thc", Q.lambda_thc},
          {"x", Q.x},
          {"deficit", Q.deficit},
          {"theta_units", int_rows(Q.theta_units)},
          {"phi_units", int_rows(Q.phi_units)},
          {"zeta_units", int_rows(Q.zeta_units)},
          {"t_units", std::vector<std::int64_t>(Q.t_units.data(), Q.t_units.data() + Q.t_units.size())}};
}

QuantizedEncoding quantized_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != "blissthc.quantized_encoding") throw SchemaError("wrong schema tag");
    if (j.at("version").get<int>() != 1) throw SchemaError("unsupported encoding version");
    QuantizedEncoding Q;
    Q.aleph = j.at("aleph").get<int>();
    Q.beth = j.at("beth").get<int>();
    Q.M = j.at("M").get<std::size_t>();
    Q.n_spatial = j.at("n_spatial").get<std::size_t>();
    Q.lambda_thc = j.at("lambda_thc").get<double>();
    Q.x = j.at("x").get<double>();
    Q.deficit = j.at("deficit").get<std::int64_t>();
    const auto m = Eigen::Index(Q.M), n = Eigen::Index(Q.n_spatial);
    if (n < 1) throw SchemaError("n_spatial must be positive");
    Q.theta_units = int_matrix(j.at("theta_units"), m, n - 1);
    Q.phi_units = int_matrix(j.at("phi_units"), n, n - 1);
    Q.zeta_units = int_matrix(j.at("zeta_units"), m, m);
    const auto t = j.at("t_units").get<std::vector<std::int64_t>>();
    if (Eigen::Index(t.size()) != n) throw SchemaError("t_units has wrong length");
    Q.t_units = Eigen::Map<const IntVector>(t.data(), n);
    Q.validate();
    return Q;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("encoding json: ") + e.what());
  }
}

}  // namespace blissthc::quant
