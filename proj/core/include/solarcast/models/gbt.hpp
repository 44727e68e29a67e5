#pragma once

#include "solarcast/matrix.hpp"
#include "solarcast/models/config.hpp"
#include "solarcast/models/tree.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <vector>

namespace solarcast::models {

/// Gain of splitting a node with gradient/hessian sums (G, H) into
/// (G_L, H_L) and (G_R, H_R):
///   1/2 [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)] - gamma
double gbt_split_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                      double lambda, double gamma) noexcept;

/// -G / (H + lambda)
double gbt_leaf_weight(double grad_sum, double hess_sum, double lambda) noexcept;

/// Second-order boosted trees for squared error (gradient = prediction -
/// target, hessian = 1), grown level by level with exact greedy splits over
/// presorted columns. Leaf values are stored already scaled by the learning
/// rate.
class GbtModel {
 public:
  static GbtModel fit(const GbtConfig& config, const Matrix& features, const Vector& target,
                      std::uint64_t seed);

  Vector predict(const Matrix& features) const;

  double base_score() const noexcept { return base_score_; }
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  /// Training MSE after each round (over all rows).
  const std::vector<double>& loss_curve() const noexcept { return loss_curve_; }

  void to_json(nlohmann::json& j) const;
  static GbtModel from_json(const nlohmann::json& j);

 private:
  double base_score_ = 0.0;
  std::vector<RegressionTree> trees_;
  std::vector<double> loss_curve_;
};

}  // namespace solarcast::models
