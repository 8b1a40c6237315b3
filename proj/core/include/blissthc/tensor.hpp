#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace blissthc::tensor_core {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense real n^4 tensor, index order (p,q,r,s), last index fastest.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  // Supermatrix view: row pq = p*n+q, column rs = r*n+s.
  Eigen::Map<RowMatrix> matrix() { return {data_.data(), Eigen::Index(n_ * n_), Eigen::Index(n_ * n_)}; }
  Eigen::Map<const RowMatrix> matrix() const {
    return {data_.data(), Eigen::Index(n_ * n_), Eigen::Index(n_ * n_)};
  }

  static Tensor4 from_matrix(std::size_t n, const Eigen::Ref<const Eigen::MatrixXd>& m);

  // Largest deviation from the real-orbital 8-fold symmetry.
  double symmetry_defect() const;
  bool all_finite() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

double frobenius_norm(const Tensor4& a);
double frobenius_distance(const Tensor4& a, const Tensor4& b);

}  // namespace blissthc::tensor_core
