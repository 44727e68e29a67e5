#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace solarcast {

// Row-major so that one observation is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline std::span<const double> row_span(const Matrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline Vector to_vector(std::span<const double> values) {
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline std::vector<double> to_std(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

Matrix take_rows(const Matrix& m, std::span<const std::size_t> rows);
Vector take_rows(const Vector& v, std::span<const std::size_t> rows);

}  // namespace solarcast
