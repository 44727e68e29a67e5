#pragma once

#include "solarcast/matrix.hpp"
#include "solarcast/models/config.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace solarcast::models {

/// Brute-force k-nearest-neighbour regressor under the Minkowski metric.
class KnnModel {
 public:
  static KnnModel fit(const KnnConfig& config, const Matrix& features, const Vector& target);

  Vector predict(const Matrix& features, std::size_t threads = 0) const;
  double predict_one(std::span<const double> query) const;

  /// Indices of the k nearest training rows, nearest first. Equal distances
  /// keep the lower row index first.
  std::vector<std::size_t> neighbours(std::span<const double> query) const;

  const KnnConfig& config() const noexcept { return config_; }

  void to_json(nlohmann::json& j) const;
  static KnnModel from_json(const KnnConfig& config, const nlohmann::json& j);

 private:
  double distance(std::span<const double> a, std::span<const double> b) const;

  KnnConfig config_;
  Matrix train_;
  Vector target_;
};

}  // namespace solarcast::models
