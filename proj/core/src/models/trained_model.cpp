#include "solarcast/models/trained_model.hpp"

#include "solarcast/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace solarcast::models {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void require_finite(const Matrix& features, Errc code, const char* what) {
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      if (!std::isfinite(features(r, c))) {
        throw Error(code, std::string(what) + " at column " + std::to_string(c), static_cast<std::size_t>(r) + 1);
      }
    }
  }
}

}  // namespace

TrainedModel::TrainedModel(ModelConfig config, Params params, std::vector<std::string> schema, std::uint64_t seed,
                           FitDiagnostics diagnostics)
    : config_(std::move(config)),
      params_(std::move(params)),
      schema_(std::move(schema)),
      seed_(seed),
      diagnostics_(std::move(diagnostics)) {}

Vector TrainedModel::predict(const Matrix& features) const {
  if (static_cast<std::size_t>(features.cols()) != schema_.size()) {
    throw Error(Errc::SchemaMismatch, "model was fitted on " + std::to_string(schema_.size()) + " columns, got " +
                                          std::to_string(features.cols()));
  }
  require_finite(features, Errc::NonFiniteFeature, "non-finite feature value");
  return std::visit([&](const auto& m) -> Vector { return m.predict(features); }, params_);
}

Vector TrainedModel::predict(const Matrix& features, std::span<const std::string> columns) const {
  if (columns.size() != schema_.size() || !std::equal(columns.begin(), columns.end(), schema_.begin())) {
    std::string expected;
    for (const auto& s : schema_) expected += (expected.empty() ? "" : ",") + s;
    std::string got;
    for (const auto& s : columns) got += (got.empty() ? "" : ",") + s;
    throw Error(Errc::SchemaMismatch, "model expects columns [" + expected + "], got [" + got + "]");
  }
  return predict(features);
}

void TrainedModel::to_json(nlohmann::json& j) const {
  nlohmann::json config;
  models::to_json(config, config_);
  nlohmann::json params;
  std::visit([&](const auto& m) { m.to_json(params); }, params_);
  j = {{"kind", to_string(kind())},
       {"config", config},
       {"schema", schema_},
       {"seed", seed_},
       {"params", params},
       {"diagnostics",
        {{"loss_curve", diagnostics_.loss_curve},
         {"support_vectors", diagnostics_.support_vectors},
         {"solver_iterations", diagnostics_.solver_iterations},
         {"warnings", diagnostics_.warnings}}}};
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  auto config = config_from_json(j.at("config"));
  const auto& p = j.at("params");
  Params params = std::visit(overloaded{
                                 [&](const KnnConfig& c) -> Params { return KnnModel::from_json(c, p); },
                                 [&](const RfConfig&) -> Params { return RandomForestModel::from_json(p); },
                                 [&](const GbtConfig&) -> Params { return GbtModel::from_json(p); },
                                 [&](const MlpConfig&) -> Params { return MlpModel::from_json(p); },
                                 [&](const SvrConfig&) -> Params { return SvrModel::from_json(p); },
                             },
                             config);
  FitDiagnostics diag;
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    diag.loss_curve = d.value("loss_curve", std::vector<double>{});
    diag.support_vectors = d.value("support_vectors", std::size_t{0});
    diag.solver_iterations = d.value("solver_iterations", std::size_t{0});
    diag.warnings = d.value("warnings", std::vector<std::string>{});
  }
  return TrainedModel(std::move(config), std::move(params), j.at("schema").get<std::vector<std::string>>(),
                      j.at("seed").get<std::uint64_t>(), std::move(diag));
}

TrainedModel fit(const ModelConfig& config, const Matrix& features, const Vector& target,
                 std::vector<std::string> schema, std::uint64_t seed) {
  validate(config);
  if (features.rows() != target.size()) throw Error(Errc::ColumnMismatch, "feature rows and target length differ");
  if (features.rows() < 2) throw Error(Errc::TooFewRows, "need at least 2 training rows");
  if (schema.size() != static_cast<std::size_t>(features.cols())) {
    throw Error(Errc::ColumnMismatch, "schema names " + std::to_string(schema.size()) + " columns, matrix has " +
                                          std::to_string(features.cols()));
  }
  require_finite(features, Errc::NonFiniteInput, "non-finite training feature");
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    if (!std::isfinite(target[i])) throw Error(Errc::NonFiniteInput, "non-finite training target", static_cast<std::size_t>(i) + 1);
  }

  FitDiagnostics diag;
  TrainedModel::Params params = std::visit(overloaded{
                                 [&](const KnnConfig& c) -> TrainedModel::Params { return KnnModel::fit(c, features, target); },
                                 [&](const RfConfig& c) -> TrainedModel::Params { return RandomForestModel::fit(c, features, target, seed); },
                                 [&](const GbtConfig& c) -> TrainedModel::Params {
                                   auto m = GbtModel::fit(c, features, target, seed);
                                   diag.loss_curve = m.loss_curve();
                                   return m;
                                 },
                                 [&](const MlpConfig& c) -> TrainedModel::Params {
                                   auto m = MlpModel::fit(c, features, target, seed);
                                   diag.loss_curve = m.loss_curve();
                                   return m;
                                 },
                                 [&](const SvrConfig& c) -> TrainedModel::Params {
                                   auto m = SvrModel::fit(c, features, target, &diag.warnings);
                                   diag.support_vectors = m.support_vector_count();
                                   diag.solver_iterations = m.solver_iterations();
                                   return m;
                                 },
                             },
                             config);
  return TrainedModel(config, std::move(params), std::move(schema), seed, std::move(diag));
}

}  // namespace solarcast::models
