#pragma once

#include "solarcast/dataio.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace solarcast::models {

enum class ModelKind { Knn, RandomForest, Gbt, Mlp, Svr };

inline constexpr std::array<ModelKind, 5> kAllModelKinds = {
    ModelKind::Knn, ModelKind::Gbt, ModelKind::Mlp, ModelKind::Svr, ModelKind::RandomForest};

/// "knn", "rf", "gbt", "mlp", "svr"
std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept;

enum class KnnWeights { Uniform, Distance };

struct KnnConfig {
  std::size_t n_neighbours = 3;
  double p = 1.0;  // Minkowski exponent
  KnnWeights weights = KnnWeights::Uniform;
};

enum class MaxFeatures { Log2, Sqrt, All };

struct RfConfig {
  std::size_t n_estimators = 300;
  MaxFeatures max_features = MaxFeatures::Log2;
  std::optional<std::size_t> max_depth;  // unbounded when absent
  std::size_t min_samples_split = 2;
};

struct GbtConfig {
  std::size_t n_estimators = 300;
  double learning_rate = 0.1;
  double subsample = 0.6;
  std::size_t max_depth = 5;
  double gamma = 0.1;   // minimum split gain
  double lambda = 1.0;  // L2 penalty on leaf weights
  double min_child_weight = 1.0;
};

/// ReLU hidden layers, identity output, Adam with an inverse-scaling step
/// size eta0 / epoch^power_t.
struct MlpConfig {
  std::vector<std::size_t> hidden_layer_sizes = {80, 80};
  std::size_t max_iter = 200;  // epochs
  double learning_rate_init = 0.001;
  double power_t = 0.5;
  std::optional<std::size_t> batch_size;  // auto = min(200, n)
  double alpha = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Epsilon-insensitive regression with k(x, z) = exp(-gamma |x - z|^2).
struct SvrConfig {
  double gamma = 0.8;
  double c = 4.0;
  double epsilon = 0.1;
  double tol = 1e-3;
  std::size_t max_passes = 1000;  // iteration cap = max_passes * n
  std::size_t cache_mb = 512;     // kernel row cache
};

using ModelConfig = std::variant<KnnConfig, RfConfig, GbtConfig, MlpConfig, SvrConfig>;

ModelKind kind_of(const ModelConfig& config) noexcept;

/// Throws InvalidArgument when a documented invariant does not hold.
void validate(const ModelConfig& config);

/// Tuned hyperparameters for each model and horizon.
ModelConfig default_config(ModelKind kind, dataio::TimeFrame frame);

void to_json(nlohmann::json& j, const ModelConfig& config);
ModelConfig config_from_json(const nlohmann::json& j);

}  // namespace solarcast::models
