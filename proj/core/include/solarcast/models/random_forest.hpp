#pragma once

#include "solarcast/matrix.hpp"
#include "solarcast/models/config.hpp"
#include "solarcast/models/tree.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <vector>

namespace solarcast::models {

/// Bagged CART regressors: bootstrap rows per tree, variance-reduction
/// splits over a random feature subset per node, mean-valued leaves.
class RandomForestModel {
 public:
  /// Tree t draws from the stream (seed, t), so the forest does not depend
  /// on the worker count.
  static RandomForestModel fit(const RfConfig& config, const Matrix& features, const Vector& target,
                               std::uint64_t seed, std::size_t threads = 0);

  Vector predict(const Matrix& features) const;

  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }

  void to_json(nlohmann::json& j) const;
  static RandomForestModel from_json(const nlohmann::json& j);

  /// Built from already-grown trees (tests, deserialization).
  explicit RandomForestModel(std::vector<RegressionTree> trees) : trees_(std::move(trees)) {}
  RandomForestModel() = default;

 private:
  std::vector<RegressionTree> trees_;
};

/// Number of candidate features tried per node.
std::size_t features_per_split(MaxFeatures rule, std::size_t n_features);

/// Grows one CART tree on the given (possibly repeated) row indices.
RegressionTree grow_cart_tree(const RfConfig& config, const Matrix& features, const Vector& target,
                              std::vector<std::size_t> rows, std::uint64_t seed);

}  // namespace solarcast::models
