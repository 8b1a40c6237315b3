#include "blissthc/tensor.hpp"

#include "blissthc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace blissthc::tensor_core {

Tensor4 Tensor4::from_matrix(std::size_t n, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (std::size_t(m.rows()) != n * n || std::size_t(m.cols()) != n * n) {
    throw DimensionError("supermatrix must be n^2 x n^2");
  }
  Tensor4 t(n);
  t.matrix() = m;
  return t;
}

double Tensor4::symmetry_defect() const {
  const auto& g = *this;
  double worst = 0.0;
  for (std::size_t p = 0; p < n_; ++p)
    for (std::size_t q = 0; q < n_; ++q)
      for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t s = 0; s < n_; ++s) {
          const double v = g(p, q, r, s);
          worst = std::max({worst, std::abs(v - g(q, p, r, s)), std::abs(v - g(p, q, s, r)),
                            std::abs(v - g(r, s, p, q))});
        }
  return worst;
}

bool Tensor4::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double frobenius_norm(const Tensor4& a) { return a.matrix().norm(); }

double frobenius_distance(const Tensor4& a, const Tensor4& b) {
  if (a.dim() != b.dim()) throw DimensionError("tensor dimensions differ");
  return (a.matrix() - b.matrix()).norm();
}

}  // namespace blissthc::tensor_core
