#include "solarcast/models/mlp.hpp"

#include "solarcast/error.hpp"
#include "solarcast/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace solarcast::models {

std::size_t MlpParams::parameter_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  }
  return n;
}

MlpParams MlpParams::initialize(std::size_t n_inputs, const std::vector<std::size_t>& hidden, std::uint64_t seed) {
  std::vector<std::size_t> sizes{n_inputs};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  Rng rng(seed);
  MlpParams p;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(sizes[l + 1]);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < fan_in; ++i) {
      for (Eigen::Index j = 0; j < fan_out; ++j) w(i, j) = rng.uniform(-bound, bound);
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::RowVectorXd::Zero(fan_out));
  }
  return p;
}

MlpParams MlpParams::zeros_like(const MlpParams& shape) {
  MlpParams p;
  for (std::size_t l = 0; l < shape.weights.size(); ++l) {
    p.weights.push_back(Eigen::MatrixXd::Zero(shape.weights[l].rows(), shape.weights[l].cols()));
    p.biases.push_back(Eigen::RowVectorXd::Zero(shape.biases[l].size()));
  }
  return p;
}

std::vector<double> MlpParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    flat.insert(flat.end(), weights[l].data(), weights[l].data() + weights[l].size());
    flat.insert(flat.end(), biases[l].data(), biases[l].data() + biases[l].size());
  }
  return flat;
}

void MlpParams::assign(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) throw Error(Errc::InvalidArgument, "mlp: flat parameter vector has the wrong size");
  std::size_t k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(k), weights[l].size(), weights[l].data());
    k += static_cast<std::size_t>(weights[l].size());
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(k), biases[l].size(), biases[l].data());
    k += static_cast<std::size_t>(biases[l].size());
  }
}

namespace {

// Pre-activations and activations of every layer; activations[0] is the input.
struct ForwardPass {
  std::vector<Eigen::MatrixXd> activations;
};

ForwardPass forward(const MlpParams& params, const Eigen::MatrixXd& inputs) {
  if (params.weights.empty()) throw Error(Errc::InvalidArgument, "mlp: network has no layers");
  if (inputs.cols() != params.weights.front().rows()) {
    throw Error(Errc::ColumnMismatch, "mlp: expected " + std::to_string(params.weights.front().rows()) + " inputs, got " +
                                          std::to_string(inputs.cols()));
  }
  ForwardPass pass;
  pass.activations.reserve(params.layer_count() + 1);
  pass.activations.push_back(inputs);
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    Eigen::MatrixXd z = pass.activations.back() * params.weights[l];
    z.rowwise() += params.biases[l];
    if (l + 1 < params.layer_count()) z = z.cwiseMax(0.0);
    pass.activations.push_back(std::move(z));
  }
  return pass;
}

double squared_weights(const MlpParams& params) {
  double s = 0.0;
  for (const auto& w : params.weights) s += w.squaredNorm();
  return s;
}

}  // namespace

Vector mlp_forward(const MlpParams& params, const Eigen::MatrixXd& inputs) {
  return forward(params, inputs).activations.back().col(0);
}

LossAndGradient mlp_loss_and_gradient(const MlpParams& params, const Eigen::MatrixXd& inputs, const Vector& targets,
                                      double alpha) {
  const auto pass = forward(params, inputs);
  const auto batch = static_cast<double>(inputs.rows());
  const Eigen::VectorXd residual = pass.activations.back().col(0) - targets;

  LossAndGradient out;
  out.loss = residual.squaredNorm() / (2.0 * batch) + alpha * squared_weights(params) / (2.0 * batch);
  out.gradient = MlpParams::zeros_like(params);

  Eigen::MatrixXd delta = residual / batch;
  for (std::size_t l = params.layer_count(); l-- > 0;) {
    const auto& a_prev = pass.activations[l];
    out.gradient.weights[l] = a_prev.transpose() * delta + (alpha / batch) * params.weights[l];
    out.gradient.biases[l] = delta.colwise().sum();
    if (l > 0) {
      delta = (delta * params.weights[l].transpose()).cwiseProduct((a_prev.array() > 0.0).cast<double>().matrix());
    }
  }
  return out;
}

MlpTrainingState MlpTrainingState::start(MlpParams params, const MlpConfig& config) {
  MlpTrainingState s;
  s.first_moment = MlpParams::zeros_like(params);
  s.second_moment = MlpParams::zeros_like(params);
  s.params = std::move(params);
  s.learning_rate = config.learning_rate_init;
  s.alpha = config.alpha;
  s.beta1 = config.beta1;
  s.beta2 = config.beta2;
  s.epsilon = config.epsilon;
  return s;
}

namespace {

template <typename Param>
void adam_update(Param& p, Param& m, Param& v, const Param& g, double beta1, double beta2, double step_size,
                 double epsilon) {
  m = beta1 * m + (1.0 - beta1) * g;
  v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
  p.array() -= step_size * m.array() / (v.array().sqrt() + epsilon);
}

}  // namespace

double mlp_backprop_step(MlpTrainingState& state, const Eigen::MatrixXd& inputs, const Vector& targets) {
  auto lg = mlp_loss_and_gradient(state.params, inputs, targets, state.alpha);
  if (!std::isfinite(lg.loss)) {
    throw Error(Errc::NonFiniteLoss, "mlp: loss is not finite after " + std::to_string(state.step) + " updates");
  }
  ++state.step;
  const auto t = static_cast<double>(state.step);
  const double step_size =
      state.learning_rate * std::sqrt(1.0 - std::pow(state.beta2, t)) / (1.0 - std::pow(state.beta1, t));
  for (std::size_t l = 0; l < state.params.layer_count(); ++l) {
    adam_update(state.params.weights[l], state.first_moment.weights[l], state.second_moment.weights[l],
                lg.gradient.weights[l], state.beta1, state.beta2, step_size, state.epsilon);
    adam_update(state.params.biases[l], state.first_moment.biases[l], state.second_moment.biases[l],
                lg.gradient.biases[l], state.beta1, state.beta2, step_size, state.epsilon);
  }
  return lg.loss;
}

MlpModel MlpModel::fit(const MlpConfig& config, const Matrix& features, const Vector& target, std::uint64_t seed) {
  validate(config);
  if (features.rows() != target.size()) throw Error(Errc::ColumnMismatch, "mlp: feature rows and target length differ");
  if (features.rows() < 2) throw Error(Errc::TooFewRows, "mlp: need at least 2 rows");
  const auto n = static_cast<std::size_t>(features.rows());
  const std::size_t batch = std::min(config.batch_size.value_or(200), n);

  auto state = MlpTrainingState::start(
      MlpParams::initialize(static_cast<std::size_t>(features.cols()), config.hidden_layer_sizes, stream_seed(seed, 0)),
      config);
  Rng shuffler(seed, 1);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  MlpModel model;
  Eigen::MatrixXd xb;
  Vector yb;
  for (std::size_t epoch = 1; epoch <= config.max_iter; ++epoch) {
    state.learning_rate = config.learning_rate_init / std::pow(static_cast<double>(epoch), config.power_t);
    shuffler.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t len = std::min(batch, n - start);
      xb.resize(static_cast<Eigen::Index>(len), features.cols());
      yb.resize(static_cast<Eigen::Index>(len));
      for (std::size_t k = 0; k < len; ++k) {
        const auto r = static_cast<Eigen::Index>(order[start + k]);
        xb.row(static_cast<Eigen::Index>(k)) = features.row(r);
        yb[static_cast<Eigen::Index>(k)] = target[r];
      }
      epoch_loss += mlp_backprop_step(state, xb, yb) * static_cast<double>(len);
    }
    model.loss_curve_.push_back(epoch_loss / static_cast<double>(n));
  }
  model.params_ = std::move(state.params);
  return model;
}

Vector MlpModel::predict(const Matrix& features) const {
  return mlp_forward(params_, Eigen::MatrixXd(features));
}

void MlpModel::to_json(nlohmann::json& j) const {
  j = {{"layers", nlohmann::json::array()}};
  for (std::size_t l = 0; l < params_.layer_count(); ++l) {
    const auto& w = params_.weights[l];
    const auto& b = params_.biases[l];
    j["layers"].push_back({{"fan_in", w.rows()},
                           {"fan_out", w.cols()},
                           {"weights", std::vector<double>(w.data(), w.data() + w.size())},
                           {"bias", std::vector<double>(b.data(), b.data() + b.size())}});
  }
}

MlpModel MlpModel::from_json(const nlohmann::json& j) {
  MlpParams p;
  for (const auto& layer : j.at("layers")) {
    const auto fan_in = layer.at("fan_in").get<Eigen::Index>();
    const auto fan_out = layer.at("fan_out").get<Eigen::Index>();
    const auto w = layer.at("weights").get<std::vector<double>>();
    const auto b = layer.at("bias").get<std::vector<double>>();
    if (w.size() != static_cast<std::size_t>(fan_in * fan_out) || b.size() != static_cast<std::size_t>(fan_out)) {
      throw Error(Errc::ParseError, "mlp: stored layer has the wrong size");
    }
    p.weights.push_back(Eigen::Map<const Eigen::MatrixXd>(w.data(), fan_in, fan_out));
    p.biases.push_back(Eigen::Map<const Eigen::RowVectorXd>(b.data(), fan_out));
  }
  if (p.weights.empty()) throw Error(Errc::ParseError, "mlp: no layers stored");
  return MlpModel(std::move(p));
}

}  // namespace solarcast::models
