#pragma once

#include "solarcast/matrix.hpp"
#include "solarcast/models/config.hpp"

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <vector>

namespace solarcast::models {

/// Layer l maps (batch x fan_in) activations through weights[l]
/// (fan_in x fan_out) plus biases[l]. Hidden layers use ReLU; the output
/// layer is a single linear unit.
struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::RowVectorXd> biases;

  std::size_t layer_count() const noexcept { return weights.size(); }
  std::size_t parameter_count() const noexcept;

  /// Glorot-uniform weights on +-sqrt(6 / (fan_in + fan_out)); zero biases.
  static MlpParams initialize(std::size_t n_inputs, const std::vector<std::size_t>& hidden,
                              std::uint64_t seed);
  static MlpParams zeros_like(const MlpParams& shape);

  /// Flattened view used by optimizers and gradient checks (weights then
  /// bias, layer by layer).
  std::vector<double> flatten() const;
  void assign(const std::vector<double>& flat);
};

Vector mlp_forward(const MlpParams& params, const Eigen::MatrixXd& inputs);

struct LossAndGradient {
  double loss = 0.0;
  MlpParams gradient;
};

/// loss = sum((y_hat - y)^2) / (2 B) + alpha * sum(W^2) / (2 B) for a batch of
/// B rows; biases are not penalized.
LossAndGradient mlp_loss_and_gradient(const MlpParams& params, const Eigen::MatrixXd& inputs,
                                      const Vector& targets, double alpha);

/// Adam optimizer state around the parameters.
struct MlpTrainingState {
  MlpParams params;
  MlpParams first_moment;
  MlpParams second_moment;
  std::size_t step = 0;
  double learning_rate = 1e-3;
  double alpha = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static MlpTrainingState start(MlpParams params, const MlpConfig& config);
};

/// One bias-corrected Adam update on a batch; returns the batch loss before
/// the update. Throws NonFiniteLoss when the loss is not finite.
double mlp_backprop_step(MlpTrainingState& state, const Eigen::MatrixXd& inputs, const Vector& targets);

class MlpModel {
 public:
  static MlpModel fit(const MlpConfig& config, const Matrix& features, const Vector& target,
                      std::uint64_t seed);

  Vector predict(const Matrix& features) const;

  const MlpParams& params() const noexcept { return params_; }
  /// Mean training loss per epoch.
  const std::vector<double>& loss_curve() const noexcept { return loss_curve_; }

  explicit MlpModel(MlpParams params) : params_(std::move(params)) {}
  MlpModel() = default;

  void to_json(nlohmann::json& j) const;
  static MlpModel from_json(const nlohmann::json& j);

 private:
  MlpParams params_;
  std::vector<double> loss_curve_;
};

}  // namespace solarcast::models
