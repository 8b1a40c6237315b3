#include "lbfgs.hpp"

#include "blissthc/errors.hpp"

#include <cmath>
#include <deque>

namespace blissthc::detail {

LbfgsResult lbfgs_minimize(const Objective& fn, Eigen::VectorXd x0, const LbfgsOptions& opt) {
  LbfgsResult res;
  res.x = std::move(x0);
  Eigen::VectorXd g(res.x.size());
  res.f = fn(res.x, g);
  if (!std::isfinite(res.f) || !g.allFinite()) throw DivergenceError(0, "initial point");
  res.gradient_norm = g.norm();

  std::deque<Eigen::VectorXd> S, Y;
  std::deque<double> rho;
  Eigen::VectorXd gt(res.x.size());

  for (int it = 1; it <= opt.max_iterations; ++it) {
    if (res.gradient_norm <= opt.gradient_tolerance) {
      res.converged = true;
      return res;
    }
    // Two-loop recursion.
    Eigen::VectorXd d = -g;
    std::vector<double> a(S.size());
    for (int i = int(S.size()) - 1; i >= 0; --i) {
      a[std::size_t(i)] = rho[std::size_t(i)] * S[std::size_t(i)].dot(d);
      d -= a[std::size_t(i)] * Y[std::size_t(i)];
    }
    if (!S.empty()) d *= S.back().dot(Y.back()) / Y.back().squaredNorm();
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double b = rho[i] * Y[i].dot(d);
      d += (a[i] - b) * S[i];
    }
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      S.clear();
      Y.clear();
      rho.clear();
      d = -g;
      slope = -g.squaredNorm();
    }
    double step = S.empty() ? std::min(1.0, 1.0 / std::max(res.gradient_norm, 1e-300)) : 1.0;

    bool accepted = false;
    bool any_finite = false;
    Eigen::VectorXd xt;
    double ft = 0.0;
    for (int k = 0; k < opt.max_backtracks; ++k) {
      xt = res.x + step * d;
      ft = fn(xt, gt);
      if (std::isfinite(ft) && gt.allFinite()) {
        any_finite = true;
        if (ft <= res.f + opt.armijo_c1 * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!any_finite) throw DivergenceError(it, "every trial step evaluated to a non-finite cost");
      // No sufficient decrease representable: stationary up to numerical precision.
      res.iterations = it - 1;
      return res;
    }
    Eigen::VectorXd s = xt - res.x;
    Eigen::VectorXd y = gt - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      rho.push_back(1.0 / sy);
      if (int(S.size()) > opt.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
    res.x = std::move(xt);
    res.f = ft;
    g = gt;
    res.gradient_norm = g.norm();
    res.iterations = it;
  }
  res.converged = res.gradient_norm <= opt.gradient_tolerance;
  return res;
}

}  // namespace blissthc::detail
