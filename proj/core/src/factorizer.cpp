#include "blissthc/factorizer.hpp"

#include "blissthc/errors.hpp"
#include "json_util.hpp"
#include "lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace blissthc::bliss {

using tensor_core::apply_bliss_shift;
using tensor_core::one_norms;
using tensor_core::RowMatrix;

void ThcFactorization::validate() const {
  const auto M = zeta.rows();
  if (zeta.cols() != M) throw DimensionError("zeta must be square");
  if (chi.rows() != M) throw DimensionError("chi must have one row per THC index");
  if (tensor_core::max_asymmetry(zeta) > 1e-12 * std::max(1.0, zeta.cwiseAbs().maxCoeff()))
    throw DomainError("zeta is not symmetric");
  for (Eigen::Index mu = 0; mu < M; ++mu)
    if (std::abs(chi.row(mu).squaredNorm() - 1.0) > 1e-10) throw DomainError("chi row is not unit norm");
  shift.validate(n_spatial());
}

void FactorizationConfig::validate() const {
  if (!(rho >= 0.0)) throw DomainError("rho must be non-negative");
  if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
  if (!(gradient_tolerance > 0.0)) throw DomainError("gradient_tolerance must be positive");
}

Eigen::VectorXd ParameterLayout::pack(const ThcFactorization& F) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i; j < M; ++j) x(k++) = F.zeta(Eigen::Index(i), Eigen::Index(j));
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t p = 0; p < n; ++p) x(k++) = F.chi(Eigen::Index(i), Eigen::Index(p));
  x(k++) = F.shift.alpha1;
  x(k++) = F.shift.alpha2;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p; q < n; ++q) x(k++) = F.shift.beta(Eigen::Index(p), Eigen::Index(q));
  return x;
}

ThcFactorization ParameterLayout::unpack(const Eigen::VectorXd& x) const {
  if (std::size_t(x.size()) != size()) throw DimensionError("parameter vector has wrong length");
  ThcFactorization F;
  const auto m = Eigen::Index(M), nn = Eigen::Index(n);
  F.zeta.resize(m, m);
  F.chi.resize(m, nn);
  F.shift = SymmetryShiftParams::zero(n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) F.zeta(i, j) = F.zeta(j, i) = x(k++);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index p = 0; p < nn; ++p) F.chi(i, p) = x(k++);
  F.shift.alpha1 = x(k++);
  F.shift.alpha2 = x(k++);
  for (Eigen::Index p = 0; p < nn; ++p)
    for (Eigen::Index q = p; q < nn; ++q) F.shift.beta(p, q) = F.shift.beta(q, p) = x(k++);
  return F;
}

namespace {

double absval(double v, const CostOptions& o) {
  if (!o.huber) return std::abs(v);
  const double a = std::abs(v);
  return a <= o.huber_width ? 0.5 * v * v / o.huber_width : a - 0.5 * o.huber_width;
}

double dabs(double v, const CostOptions& o) {
  if (!o.huber) return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  return std::clamp(v / o.huber_width, -1.0, 1.0);
}

// Row mu of A is vec(chi_mu chi_mu^T).
RowMatrix pair_matrix(const Eigen::MatrixXd& chi_hat) {
  const auto M = chi_hat.rows(), n = chi_hat.cols();
  RowMatrix A(M, n * n);
  for (Eigen::Index mu = 0; mu < M; ++mu)
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q) A(mu, p * n + q) = chi_hat(mu, p) * chi_hat(mu, q);
  return A;
}

Eigen::MatrixXd normalized_rows(const Eigen::MatrixXd& chi, Eigen::VectorXd* norms = nullptr) {
  Eigen::MatrixXd out = chi;
  if (norms) norms->resize(chi.rows());
  for (Eigen::Index mu = 0; mu < chi.rows(); ++mu) {
    const double nr = chi.row(mu).norm();
    if (norms) (*norms)(mu) = nr;
    out.row(mu) /= nr;
  }
  return out;
}

struct Evaluation {
  double l2_sq = 0.0;
  double penalty = 0.0;
  double lambda = 0.0;
};

// Core evaluation; fills gradient blocks when grad != nullptr.
Evaluation evaluate_terms(const ElectronicHamiltonian& H, const ThcFactorization& F, double rho,
                          const CostOptions& opt, const ParameterLayout* layout, Eigen::VectorXd* grad) {
  const auto n = Eigen::Index(H.n_spatial());
  const auto M = F.zeta.rows();
  if (F.chi.cols() != n || F.chi.rows() != M || F.zeta.cols() != M)
    throw DimensionError("factorization does not match the Hamiltonian");
  const auto shifted = apply_bliss_shift(H, F.shift);

  Eigen::VectorXd norms;
  const Eigen::MatrixXd X = normalized_rows(F.chi, &norms);
  const RowMatrix A = pair_matrix(X);
  const RowMatrix R = shifted.g.matrix() - A.transpose() * F.zeta * A;

  Evaluation ev;
  ev.l2_sq = R.squaredNorm();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shifted.kappa);
  const Eigen::VectorXd& t = es.eigenvalues();
  double pen = 0.0, lam = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    pen += absval(t(k), opt);
    lam += std::abs(t(k));
  }
  for (Eigen::Index i = 0; i < M; ++i) {
    pen += 0.25 * absval(F.zeta(i, i), opt);
    lam += 0.25 * std::abs(F.zeta(i, i));
    for (Eigen::Index j = i + 1; j < M; ++j) {
      pen += absval(F.zeta(i, j), opt);
      lam += std::abs(F.zeta(i, j));
    }
  }
  ev.penalty = pen;
  ev.lambda = lam;
  if (!grad) return ev;

  grad->setZero(Eigen::Index(layout->size()));
  auto& gr = *grad;

  // zeta
  const Eigen::MatrixXd dZ = -(A * R * A.transpose());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = i; j < M; ++j) {
      gr(k++) = i == j ? dZ(i, i) + rho * 0.25 * dabs(F.zeta(i, i), opt)
                       : 2.0 * dZ(i, j) + rho * dabs(F.zeta(i, j), opt);
    }

  // chi through A and the row normalization
  const RowMatrix dA = -2.0 * F.zeta * A * R;
  for (Eigen::Index mu = 0; mu < M; ++mu) {
    Eigen::Map<const RowMatrix> W(dA.row(mu).data(), n, n);
    const Eigen::VectorXd xh = X.row(mu).transpose();
    const Eigen::VectorXd dxh = (W + W.transpose()) * xh;
    const Eigen::VectorXd dx = (dxh - xh * xh.dot(dxh)) / norms(mu);
    for (Eigen::Index p = 0; p < n; ++p) gr(k++) = dx(p);
  }

  // shift: two-body residual path + one-body penalty path
  double d_alpha2 = 0.0;
  Eigen::MatrixXd d_beta = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index r = 0; r < n; ++r) d_alpha2 -= R(p * n + p, r * n + r);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index r = 0; r < n; ++r) d_beta(p, q) -= R(p * n + q, r * n + r);

  Eigen::VectorXd sg(n);
  for (Eigen::Index i = 0; i < n; ++i) sg(i) = dabs(t(i), opt);
  const Eigen::MatrixXd Sg = es.eigenvectors() * sg.asDiagonal() * es.eigenvectors().transpose();
  const double trS = Sg.trace();
  const double eta = H.eta();
  double d_alpha1 = -rho * trS;
  d_alpha2 += -rho * double(n) * trS;
  d_beta += rho * (0.5 * (eta - double(n)) * Sg - 0.5 * trS * Eigen::MatrixXd::Identity(n, n));

  gr(k++) = d_alpha1;
  gr(k++) = d_alpha2;
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = p; q < n; ++q) gr(k++) = p == q ? d_beta(p, p) : d_beta(p, q) + d_beta(q, p);
  return ev;
}

}  // namespace

double cost(const ElectronicHamiltonian& H, const ThcFactorization& F, double rho, const CostOptions& opt) {
  const auto ev = evaluate_terms(H, F, rho, opt, nullptr, nullptr);
  return 0.5 * ev.l2_sq + rho * ev.penalty;
}

double cost_and_gradient(const ElectronicHamiltonian& H, const ParameterLayout& layout, const Eigen::VectorXd& x,
                         double rho, Eigen::VectorXd& grad, const CostOptions& opt) {
  const auto F = layout.unpack(x);
  const auto ev = evaluate_terms(H, F, rho, opt, &layout, &grad);
  return 0.5 * ev.l2_sq + rho * ev.penalty;
}

Eigen::VectorXd gradient(const ElectronicHamiltonian& H, const ThcFactorization& F, double rho,
                         const CostOptions& opt) {
  const ParameterLayout layout{F.rank(), H.n_spatial()};
  Eigen::VectorXd g;
  cost_and_gradient(H, layout, layout.pack(F), rho, g, opt);
  return g;
}

Tensor4 reconstruct_g(const ThcFactorization& F) {
  const auto n = F.n_spatial();
  const RowMatrix A = pair_matrix(normalized_rows(F.chi));
  return Tensor4::from_matrix(n, A.transpose() * F.zeta * A);
}

FactorizationReport evaluate(const ElectronicHamiltonian& H, const ThcFactorization& F) {
  const auto ev = evaluate_terms(H, F, 0.0, {}, nullptr, nullptr);
  FactorizationReport r;
  r.l2_error = std::sqrt(ev.l2_sq);
  r.lambda_thc = ev.lambda;
  r.final_cost = 0.5 * ev.l2_sq;
  return r;
}

namespace {

Eigen::VectorXd random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = nd(rng);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

Eigen::MatrixXd pseudo_inverse_sym(const Eigen::MatrixXd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  const auto& w = es.eigenvalues();
  const double cut = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) inv(i) = std::abs(w(i)) > cut ? 1.0 / w(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// Least-squares zeta for fixed chi: min || G - A^T zeta A ||_F.
Eigen::MatrixXd solve_zeta(const RowMatrix& G, const Eigen::MatrixXd& chi) {
  const RowMatrix A = pair_matrix(normalized_rows(chi));
  const Eigen::MatrixXd Pinv = pseudo_inverse_sym(A * A.transpose());
  Eigen::MatrixXd z = Pinv * (A * G * A.transpose()) * Pinv;
  return 0.5 * (z + z.transpose());
}

// Candidate directions from a pivoted Cholesky decomposition of the supermatrix:
// each Cholesky vector is a symmetric n x n matrix whose eigenvectors seed chi.
std::vector<Eigen::VectorXd> cholesky_directions(const RowMatrix& G, std::size_t n) {
  const auto N = G.rows();
  Eigen::VectorXd d = G.diagonal();
  const double d0 = d.cwiseAbs().maxCoeff();
  std::vector<Eigen::VectorXd> L;
  struct Cand {
    double w;
    Eigen::VectorXd v;
  };
  std::vector<Cand> cands;
  if (d0 <= 0.0) return {};
  for (Eigen::Index k = 0; k < N; ++k) {
    Eigen::Index piv;
    const double dmax = d.maxCoeff(&piv);
    if (dmax <= 1e-12 * d0) break;
    Eigen::VectorXd l = G.col(piv);
    for (const auto& lj : L) l -= lj * lj(piv);
    l /= std::sqrt(dmax);
    d -= l.cwiseAbs2();
    L.push_back(l);
    Eigen::Map<const RowMatrix> Lm(l.data(), Eigen::Index(n), Eigen::Index(n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Lm + Lm.transpose()));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      cands.push_back({std::abs(es.eigenvalues()(i)), es.eigenvectors().col(i)});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.w > b.w; });
  const double wmax = cands.empty() ? 0.0 : cands.front().w;
  std::vector<Eigen::VectorXd> out;
  for (const auto& c : cands) {
    if (c.w <= 1e-10 * wmax) break;
    bool dup = false;
    for (const auto& o : out)
      if (std::abs(o.dot(c.v)) > 1.0 - 1e-10) dup = true;
    if (!dup) out.push_back(c.v);
  }
  return out;
}

}  // namespace

ThcFactorization pad_rank(const ThcFactorization& F, std::size_t M_new, std::uint64_t seed) {
  const auto M = F.rank();
  if (M_new < M) throw DomainError("pad_rank cannot shrink a factorization");
  ThcFactorization out;
  const auto m = Eigen::Index(M_new);
  out.zeta = Eigen::MatrixXd::Zero(m, m);
  out.zeta.topLeftCorner(Eigen::Index(M), Eigen::Index(M)) = F.zeta;
  out.chi.resize(m, Eigen::Index(F.n_spatial()));
  out.chi.topRows(Eigen::Index(M)) = F.chi;
  std::mt19937_64 rng(seed);
  for (auto i = Eigen::Index(M); i < m; ++i) out.chi.row(i) = random_unit(F.n_spatial(), rng).transpose();
  out.shift = F.shift;
  return out;
}

ThcFactorization initial_guess(const ElectronicHamiltonian& H, std::size_t M, const FactorizationConfig& cfg) {
  if (M < 1) throw DomainError("rank M must be >= 1");
  const auto n = H.n_spatial();
  if (cfg.warm_start) {
    const auto& w = *cfg.warm_start;
    if (w.n_spatial() != n) throw DimensionError("warm start has a different orbital count");
    if (w.rank() > M) throw DomainError("warm start rank exceeds requested rank");
    return pad_rank(w, M, cfg.seed + M);
  }
  const RowMatrix G = H.g().matrix();
  std::mt19937_64 rng(cfg.seed);
  auto dirs = cholesky_directions(G, n);
  ThcFactorization F;
  F.shift = SymmetryShiftParams::zero(n);
  F.chi.resize(Eigen::Index(M), Eigen::Index(n));
  for (std::size_t mu = 0; mu < M; ++mu)
    F.chi.row(Eigen::Index(mu)) = mu < dirs.size() ? dirs[mu].transpose() : random_unit(n, rng).transpose();
  F.zeta = solve_zeta(G, F.chi);

  // Alternating refinement: chi by L-BFGS with zeta fixed, then an exact zeta solve.
  const ParameterLayout layout{M, n};
  for (int round = 0; round < cfg.init_refinement_rounds; ++round) {
    detail::LbfgsOptions lo;
    lo.max_iterations = 50;
    lo.gradient_tolerance = cfg.gradient_tolerance;
    lo.memory = cfg.lbfgs_memory;
    const auto lo_chi = Eigen::Index(layout.chi_offset());
    const auto hi_chi = Eigen::Index(layout.shift_offset());
    auto fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      const double f = cost_and_gradient(H, layout, x, 0.0, g);
      g.head(lo_chi).setZero();
      g.tail(g.size() - hi_chi).setZero();
      return f;
    };
    auto res = detail::lbfgs_minimize(fn, layout.pack(F), lo);
    F = layout.unpack(res.x);
    F.chi = normalized_rows(F.chi);
    F.zeta = solve_zeta(G, F.chi);
  }
  return F;
}

std::pair<ThcFactorization, FactorizationReport> optimize(const ElectronicHamiltonian& H, std::size_t M,
                                                          const FactorizationConfig& cfg) {
  cfg.validate();
  ThcFactorization F0 = initial_guess(H, M, cfg);
  const ParameterLayout layout{M, H.n_spatial()};
  const CostOptions copt{cfg.huber, cfg.huber_width};
  const auto shift_lo = Eigen::Index(layout.shift_offset());

  detail::LbfgsOptions lo;
  lo.max_iterations = cfg.max_iterations;
  lo.gradient_tolerance = cfg.gradient_tolerance;
  lo.memory = cfg.lbfgs_memory;
  auto fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const double f = cost_and_gradient(H, layout, x, cfg.rho, g, copt);
    if (!cfg.optimize_shift) g.tail(g.size() - shift_lo).setZero();
    return f;
  };
  auto res = detail::lbfgs_minimize(fn, layout.pack(F0), lo);

  ThcFactorization F = layout.unpack(res.x);
  F.chi = normalized_rows(F.chi);
  FactorizationReport rep = evaluate(H, F);
  rep.final_cost = res.f;
  rep.iterations = res.iterations;
  rep.converged = res.converged;
  return {std::move(F), rep};
}

std::vector<RankSweepRow> rank_sweep(const ElectronicHamiltonian& H, const std::vector<std::size_t>& ranks,
                                     const FactorizationConfig& cfg) {
  for (std::size_t i = 1; i < ranks.size(); ++i)
    if (ranks[i] <= ranks[i - 1]) throw DomainError("ranks must be strictly ascending");
  std::vector<RankSweepRow> rows;
  FactorizationConfig c = cfg;
  for (auto M : ranks) {
    auto [F, rep] = optimize(H, M, c);
    c.warm_start = F;
    rows.push_back({M, rep, std::move(F)});
  }
  return rows;
}

std::vector<PathPoint> regularization_path(const ElectronicHamiltonian& H, std::size_t M,
                                           const std::vector<double>& rhos, const FactorizationConfig& cfg) {
  for (std::size_t i = 1; i < rhos.size(); ++i)
    if (rhos[i] < rhos[i - 1]) throw DomainError("rho values must be ascending");
  std::vector<PathPoint> runs;
  FactorizationConfig c = cfg;
  for (double rho : rhos) {
    c.rho = rho;
    auto [F, rep] = optimize(H, M, c);
    c.warm_start = F;
    runs.push_back({rho, rep, std::move(F)});
  }
  const CostOptions copt{cfg.huber, cfg.huber_width};
  std::vector<PathPoint> out;
  for (const auto& target : runs) {
    std::size_t best = 0;
    double best_cost = INFINITY;
    for (std::size_t j = 0; j < runs.size(); ++j) {
      const double cj = cost(H, runs[j].factorization, target.rho, copt);
      if (cj < best_cost) {
        best_cost = cj;
        best = j;
      }
    }
    PathPoint p{target.rho, evaluate(H, runs[best].factorization), runs[best].factorization};
    p.report.final_cost = best_cost;
    p.report.iterations = runs[best].report.iterations;
    p.report.converged = runs[best].report.converged;
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::json to_json(const ThcFactorization& F) {
  std::vector<double> z(F.zeta.size()), c(F.chi.size());
  Eigen::Map<RowMatrix>(z.data(), F.zeta.rows(), F.zeta.cols()) = F.zeta;
  Eigen::Map<RowMatrix>(c.data(), F.chi.rows(), F.chi.cols()) = F.chi;
  return {{"schema", "blissthc.thc_factorization"},
          {"version", 1},
          {"M", F.rank()},
          {"n_spatial", F.n_spatial()},
          {"zeta", z},
          {"chi", c},
          {"shift", tensor_core::to_json(F.shift)}};
}

ThcFactorization factorization_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != "blissthc.thc_factorization") throw SchemaError("wrong schema tag");
    if (j.at("version").get<int>() != 1) throw SchemaError("unsupported factorization version");
    const auto M = Eigen::Index(j.at("M").get<std::size_t>());
    const auto n = Eigen::Index(j.at("n_spatial").get<std::size_t>());
    const auto z = j.at("zeta").get<std::vector<double>>();
    const auto c = j.at("chi").get<std::vector<double>>();
    if (Eigen::Index(z.size()) != M * M || Eigen::Index(c.size()) != M * n)
      throw SchemaError("zeta/chi lengths do not match M and n_spatial");
    ThcFactorization F;
    F.zeta = Eigen::Map<const RowMatrix>(z.data(), M, M);
    F.chi = Eigen::Map<const RowMatrix>(c.data(), M, n);
    F.shift = tensor_core::shift_from_json(j.at("shift"));
    F.validate();
    return F;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("factorization json: ") + e.what());
  }
}

nlohmann::json to_json(const FactorizationReport& r) {
  return {{"l2_error", r.l2_error},
          {"lambda_thc", r.lambda_thc},
          {"final_cost", r.final_cost},
          {"iterations", r.iterations},
          {"converged", r.converged}};
}

std::string rank_sweep_csv_header() { return "M,l2_error,lambda_thc,iterations,converged"; }

std::string rank_sweep_csv_row(const RankSweepRow& row) {
  std::ostringstream s;
  s << std::setprecision(17) << row.M << ',' << row.report.l2_error << ',' << row.report.lambda_thc << ','
    << row.report.iterations << ',' << (row.report.converged ? "true" : "false");
  return s.str();
}

}  // namespace blissthc::bliss
