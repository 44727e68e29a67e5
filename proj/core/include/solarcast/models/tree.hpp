#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace solarcast::models {

/// Binary regression tree in a flat array. Children of an internal node are
/// stored next to each other: right == left + 1. Rows with
/// x[feature] <= threshold go left.
class RegressionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    std::int32_t left = -1;
    double threshold = 0.0;
    double value = 0.0;  // leaf output

    bool is_leaf() const noexcept { return feature < 0; }
  };

  RegressionTree() = default;
  explicit RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  double predict(std::span<const double> row) const noexcept {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
      const auto& n = nodes_[i];
      i = static_cast<std::size_t>(n.left) + (row[static_cast<std::size_t>(n.feature)] <= n.threshold ? 0 : 1);
    }
    return nodes_[i].value;
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  /// Compact form: {"n": count, "data": base64 of packed little-endian nodes}.
  void to_json(nlohmann::json& j) const;
  static RegressionTree from_json(const nlohmann::json& j);

 private:
  std::vector<Node> nodes_;
};

/// Midpoint split threshold between two distinct sorted values, guarded so
/// that `lo <= t < hi` holds even for adjacent doubles.
inline double split_threshold(double lo, double hi) noexcept {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

}  // namespace solarcast::models
