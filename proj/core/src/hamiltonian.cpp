#include "blissthc/hamiltonian.hpp"

#include "blissthc/errors.hpp"
#include "json_util.hpp"

#include <cmath>
#include <string>

namespace blissthc::tensor_core {

double max_asymmetry(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
}

ElectronicHamiltonian::ElectronicHamiltonian(Eigen::MatrixXd h, Tensor4 g, int eta, double core_energy)
    : h_(std::move(h)), g_(std::move(g)), eta_(eta), core_energy_(core_energy) {
  const auto n = std::size_t(h_.rows());
  if (h_.rows() != h_.cols()) throw DimensionError("h must be square");
  if (g_.dim() != n) throw DimensionError("g dimension does not match h");
  if (!h_.allFinite() || !g_.all_finite() || !std::isfinite(core_energy_)) {
    throw DomainError("integrals must be finite");
  }
  if (max_asymmetry(h_) > 1e-10 * std::max(1.0, h_.cwiseAbs().maxCoeff())) {
    throw IntegrityError("h is not symmetric");
  }
  double scale = 1.0;
  for (double v : g_.data()) scale = std::max(scale, std::abs(v));
  if (g_.symmetry_defect() > 1e-10 * scale) throw IntegrityError("g violates 8-fold symmetry");
  if (eta_ < 0 || std::size_t(eta_) > 2 * n) {
    throw DomainError("electron count " + std::to_string(eta_) + " outside [0, 2n]");
  }
}

SymmetryShiftParams SymmetryShiftParams::zero(std::size_t n_spatial) {
  SymmetryShiftParams s;
  s.beta = Eigen::MatrixXd::Zero(Eigen::Index(n_spatial), Eigen::Index(n_spatial));
  return s;
}

void SymmetryShiftParams::validate(std::size_t n_spatial) const {
  if (std::size_t(beta.rows()) != n_spatial || std::size_t(beta.cols()) != n_spatial) {
    throw DimensionError("beta must be n_spatial x n_spatial");
  }
  if (max_asymmetry(beta) > 1e-12) throw DomainError("beta is not symmetric");
}

Eigen::MatrixXd one_body_matrix(const ElectronicHamiltonian& H) {
  const auto n = H.n_spatial();
  const auto& g = H.g();
  Eigen::MatrixXd t = H.h();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += -0.5 * g(p, r, r, q) + g(p, q, r, r);
      t(Eigen::Index(p), Eigen::Index(q)) += acc;
    }
  return 0.5 * (t + t.transpose());
}

ShiftedIntegrals apply_bliss_shift(const ElectronicHamiltonian& H, const SymmetryShiftParams& S) {
  const auto n = H.n_spatial();
  S.validate(n);
  const auto& g = H.g();
  ShiftedIntegrals out{Eigen::MatrixXd(H.h()), g};
  auto& gb = out.g;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          double shift = 0.0;
          if (p == q && r == s) shift += S.alpha2;
          if (r == s) shift += 0.5 * S.beta(Eigen::Index(p), Eigen::Index(q));
          if (p == q) shift += 0.5 * S.beta(Eigen::Index(r), Eigen::Index(s));
          gb(p, q, r, s) -= shift;
        }
  const double eta = H.eta();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += -0.5 * g(p, r, r, q) + gb(p, q, r, r);
      const auto P = Eigen::Index(p), Q = Eigen::Index(q);
      out.kappa(P, Q) += acc + 0.5 * S.beta(P, Q) * eta - (p == q ? S.alpha1 : 0.0);
    }
  out.kappa = 0.5 * (out.kappa + out.kappa.transpose());
  return out;
}

OneNormReport one_norms(const Eigen::MatrixXd& one_body, const Eigen::MatrixXd& zeta) {
  const double tol = 1e-10;
  if (max_asymmetry(one_body) > tol * std::max(1.0, one_body.cwiseAbs().maxCoeff()))
    throw DomainError("one-body matrix is not symmetric");
  if (zeta.size() > 0 && max_asymmetry(zeta) > tol * std::max(1.0, zeta.cwiseAbs().maxCoeff()))
    throw DomainError("zeta is not symmetric");
  OneNormReport rep;
  if (one_body.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(one_body, Eigen::EigenvaluesOnly);
    rep.t_eigenvalues = es.eigenvalues();
  }
  const double t_sum = rep.t_eigenvalues.cwiseAbs().sum();
  const double z_sum = zeta.cwiseAbs().sum();
  const double z_diag = zeta.size() > 0 ? zeta.diagonal().cwiseAbs().sum() : 0.0;
  rep.lambda_plain = t_sum + 0.5 * z_sum;
  rep.lambda_circ = rep.lambda_plain - 0.25 * z_diag;
  rep.lambda_thc = rep.lambda_circ;
  return rep;
}

using detail::matrix_rows;
using detail::rows_matrix;

nlohmann::json to_json(const ElectronicHamiltonian& H) {
  return {{"schema", "blissthc.hamiltonian"},
          {"version", 1},
          {"n_spatial", H.n_spatial()},
          {"eta", H.eta()},
          {"core_energy", H.core_energy()},
          {"h", matrix_rows(H.h())},
          {"g", H.g().data()}};
}

ElectronicHamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != "blissthc.hamiltonian") throw SchemaError("wrong schema tag");
    if (j.at("version").get<int>() != 1) throw SchemaError("unsupported hamiltonian version");
    const auto n = j.at("n_spatial").get<std::size_t>();
    Tensor4 g(n);
    auto data = j.at("g").get<std::vector<double>>();
    if (data.size() != g.size()) throw SchemaError("g has wrong length");
    g.data() = std::move(data);
    Eigen::MatrixXd h = rows_matrix(j.at("h"));
    return ElectronicHamiltonian(std::move(h), std::move(g), j.at("eta").get<int>(),
                                 j.at("core_energy").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("hamiltonian json: ") + e.what());
  }
}

nlohmann::json to_json(const SymmetryShiftParams& S) {
  return {{"alpha1", S.alpha1}, {"alpha2", S.alpha2}, {"beta", matrix_rows(S.beta)}};
}

SymmetryShiftParams shift_from_json(const nlohmann::json& j) {
  try {
    SymmetryShiftParams s;
    s.alpha1 = j.at("alpha1").get<double>();
    s.alpha2 = j.at("alpha2").get<double>();
    s.beta = rows_matrix(j.at("beta"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("shift json: ") + e.what());
  }
}

}  // namespace blissthc::tensor_core
