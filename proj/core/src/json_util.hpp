#pragma once

#include "blissthc/errors.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace blissthc::detail {

template <typename Derived>
nlohmann::json matrix_rows(const Eigen::MatrixBase<Derived>& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rows_matrix(const nlohmann::json& j,
                                                                   Eigen::Index cols_if_empty = 0) {
  if (!j.is_array()) throw SchemaError("expected an array of rows");
  const auto r = Eigen::Index(j.size());
  const auto c = r == 0 ? cols_if_empty : Eigen::Index(j.at(0).size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = j.at(std::size_t(i));
    if (!row.is_array() || Eigen::Index(row.size()) != c) throw SchemaError("ragged matrix");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = row.at(std::size_t(k)).get<Scalar>();
  }
  return m;
}

}  // namespace blissthc::detail
