#include "solarcast/models/config.hpp"

#include "solarcast/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace solarcast::models {

using nlohmann::json;
using dataio::TimeFrame;

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::InvalidArgument, what);
}

std::string_view to_string(MaxFeatures m) {
  switch (m) {
    case MaxFeatures::Log2: return "log2";
    case MaxFeatures::Sqrt: return "sqrt";
    case MaxFeatures::All: return "all";
  }
  return "log2";
}

MaxFeatures parse_max_features(const std::string& s) {
  if (s == "log2") return MaxFeatures::Log2;
  if (s == "sqrt") return MaxFeatures::Sqrt;
  if (s == "all") return MaxFeatures::All;
  throw Error(Errc::InvalidArgument, "unknown max_features '" + s + "'");
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Knn: return "knn";
    case ModelKind::RandomForest: return "rf";
    case ModelKind::Gbt: return "gbt";
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Svr: return "svr";
  }
  return "rf";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept {
  for (auto k : kAllModelKinds) {
    if (to_string(k) == text) return k;
  }
  if (text == "xgboost") return ModelKind::Gbt;
  return std::nullopt;
}

ModelKind kind_of(const ModelConfig& config) noexcept {
  return std::visit(overloaded{
                        [](const KnnConfig&) { return ModelKind::Knn; },
                        [](const RfConfig&) { return ModelKind::RandomForest; },
                        [](const GbtConfig&) { return ModelKind::Gbt; },
                        [](const MlpConfig&) { return ModelKind::Mlp; },
                        [](const SvrConfig&) { return ModelKind::Svr; },
                    },
                    config);
}

void validate(const ModelConfig& config) {
  std::visit(overloaded{
                 [](const KnnConfig& c) {
                   require(c.n_neighbours >= 1, "knn: n_neighbours must be >= 1");
                   require(c.p >= 1.0, "knn: p must be >= 1");
                 },
                 [](const RfConfig& c) {
                   require(c.n_estimators >= 1, "rf: n_estimators must be >= 1");
                   require(c.min_samples_split >= 2, "rf: min_samples_split must be >= 2");
                 },
                 [](const GbtConfig& c) {
                   require(c.n_estimators >= 1, "gbt: n_estimators must be >= 1");
                   require(c.learning_rate > 0.0, "gbt: learning_rate must be > 0");
                   require(c.subsample > 0.0 && c.subsample <= 1.0, "gbt: subsample must be in (0, 1]");
                   require(c.gamma >= 0.0, "gbt: gamma must be >= 0");
                   require(c.lambda >= 0.0, "gbt: lambda must be >= 0");
                 },
                 [](const MlpConfig& c) {
                   for (auto s : c.hidden_layer_sizes) require(s >= 1, "mlp: layer sizes must be >= 1");
                   require(c.max_iter >= 1, "mlp: max_iter must be >= 1");
                   require(c.learning_rate_init > 0.0, "mlp: learning_rate_init must be > 0");
                   require(c.alpha >= 0.0, "mlp: alpha must be >= 0");
                   require(!c.batch_size || *c.batch_size >= 1, "mlp: batch_size must be >= 1");
                 },
                 [](const SvrConfig& c) {
                   require(c.gamma > 0.0, "svr: gamma must be > 0");
                   require(c.c > 0.0, "svr: C must be > 0");
                   require(c.epsilon >= 0.0, "svr: epsilon must be >= 0");
                   require(c.tol > 0.0, "svr: tol must be > 0");
                   require(c.max_passes >= 1, "svr: max_passes must be >= 1");
                 },
             },
             config);
}

ModelConfig default_config(ModelKind kind, TimeFrame frame) {
  const int h = frame == TimeFrame::ThirtyMin ? 0 : frame == TimeFrame::OneHour ? 1 : 2;
  switch (kind) {
    case ModelKind::Knn:
      return KnnConfig{3, 1.0, KnnWeights::Uniform};
    case ModelKind::RandomForest: {
      RfConfig c;
      c.n_estimators = std::array<std::size_t, 3>{350, 300, 200}[h];
      c.max_features = MaxFeatures::Log2;
      return c;
    }
    case ModelKind::Gbt: {
      GbtConfig c;
      c.n_estimators = std::array<std::size_t, 3>{450, 300, 250}[h];
      c.learning_rate = 0.1;
      c.subsample = 0.6;
      c.max_depth = std::array<std::size_t, 3>{10, 5, 5}[h];
      c.gamma = 0.1;
      return c;
    }
    case ModelKind::Mlp: {
      MlpConfig c;
      c.hidden_layer_sizes = h == 0 ? std::vector<std::size_t>{80, 80, 80, 80} : std::vector<std::size_t>{80, 80};
      c.max_iter = 200;
      c.alpha = 1e-4;
      return c;
    }
    case ModelKind::Svr: {
      SvrConfig c;
      c.gamma = std::array<double, 3>{0.8, 0.8, 0.6}[h];
      c.c = std::array<double, 3>{4.0, 4.0, 5.0}[h];
      c.epsilon = 0.1;
      return c;
    }
  }
  return RfConfig{};
}

void to_json(json& j, const ModelConfig& config) {
  j = std::visit(
      overloaded{
          [](const KnnConfig& c) -> json {
            return {{"kind", "knn"},
                    {"n_neighbours", c.n_neighbours},
                    {"p", c.p},
                    {"weights", c.weights == KnnWeights::Uniform ? "uniform" : "distance"}};
          },
          [](const RfConfig& c) -> json {
            return {{"kind", "rf"},
                    {"n_estimators", c.n_estimators},
                    {"max_features", to_string(c.max_features)},
                    {"max_depth", c.max_depth ? json(*c.max_depth) : json(nullptr)},
                    {"min_samples_split", c.min_samples_split}};
          },
          [](const GbtConfig& c) -> json {
            return {{"kind", "gbt"},           {"n_estimators", c.n_estimators},
                    {"learning_rate", c.learning_rate}, {"subsample", c.subsample},
                    {"max_depth", c.max_depth}, {"gamma", c.gamma},
                    {"lambda", c.lambda},       {"min_child_weight", c.min_child_weight}};
          },
          [](const MlpConfig& c) -> json {
            return {{"kind", "mlp"},
                    {"hidden_layer_sizes", c.hidden_layer_sizes},
                    {"max_iter", c.max_iter},
                    {"activation", "relu"},
                    {"solver", "adam"},
                    {"learning_rate", "invscaling"},
                    {"learning_rate_init", c.learning_rate_init},
                    {"power_t", c.power_t},
                    {"batch_size", c.batch_size ? json(*c.batch_size) : json("auto")},
                    {"alpha", c.alpha},
                    {"beta1", c.beta1},
                    {"beta2", c.beta2},
                    {"epsilon", c.epsilon}};
          },
          [](const SvrConfig& c) -> json {
            return {{"kind", "svr"},       {"kernel", "rbf"},       {"gamma", c.gamma},
                    {"C", c.c},            {"epsilon", c.epsilon},  {"tol", c.tol},
                    {"max_passes", c.max_passes}, {"cache_mb", c.cache_mb}};
          },
      },
      config);
}

ModelConfig config_from_json(const json& j) {
  const auto kind = parse_model_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(Errc::InvalidArgument, "unknown model kind in config");
  switch (*kind) {
    case ModelKind::Knn: {
      KnnConfig c;
      c.n_neighbours = j.at("n_neighbours").get<std::size_t>();
      c.p = j.at("p").get<double>();
      c.weights = j.at("weights").get<std::string>() == "distance" ? KnnWeights::Distance : KnnWeights::Uniform;
      return c;
    }
    case ModelKind::RandomForest: {
      RfConfig c;
      c.n_estimators = j.at("n_estimators").get<std::size_t>();
      c.max_features = parse_max_features(j.at("max_features").get<std::string>());
      if (!j.at("max_depth").is_null()) c.max_depth = j.at("max_depth").get<std::size_t>();
      c.min_samples_split = j.value("min_samples_split", std::size_t{2});
      return c;
    }
    case ModelKind::Gbt: {
      GbtConfig c;
      c.n_estimators = j.at("n_estimators").get<std::size_t>();
      c.learning_rate = j.at("learning_rate").get<double>();
      c.subsample = j.at("subsample").get<double>();
      c.max_depth = j.at("max_depth").get<std::size_t>();
      c.gamma = j.at("gamma").get<double>();
      c.lambda = j.value("lambda", 1.0);
      c.min_child_weight = j.value("min_child_weight", 1.0);
      return c;
    }
    case ModelKind::Mlp: {
      MlpConfig c;
      c.hidden_layer_sizes = j.at("hidden_layer_sizes").get<std::vector<std::size_t>>();
      c.max_iter = j.at("max_iter").get<std::size_t>();
      c.learning_rate_init = j.value("learning_rate_init", 0.001);
      c.power_t = j.value("power_t", 0.5);
      if (j.contains("batch_size") && j.at("batch_size").is_number()) c.batch_size = j.at("batch_size").get<std::size_t>();
      c.alpha = j.at("alpha").get<double>();
      c.beta1 = j.value("beta1", 0.9);
      c.beta2 = j.value("beta2", 0.999);
      c.epsilon = j.value("epsilon", 1e-8);
      return c;
    }
    case ModelKind::Svr: {
      SvrConfig c;
      c.gamma = j.at("gamma").get<double>();
      c.c = j.at("C").get<double>();
      c.epsilon = j.at("epsilon").get<double>();
      c.tol = j.value("tol", 1e-3);
      c.max_passes = j.value("max_passes", std::size_t{1000});
      c.cache_mb = j.value("cache_mb", std::size_t{512});
      return c;
    }
  }
  return RfConfig{};
}

}  // namespace solarcast::models
