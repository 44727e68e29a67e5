#include "solarcast/evaluate/pipeline.hpp"

#include "solarcast/error.hpp"

#include <nlohmann/json.hpp>

namespace solarcast::evaluate {

namespace {

constexpr std::string_view kFormat = "solarcast-pipeline";
constexpr int kFormatVersion = 1;

}  // namespace

PipelineConfig default_pipeline(models::ModelKind kind, dataio::TimeFrame horizon, features::Preset preset,
                                std::size_t n_priors) {
  PipelineConfig c;
  c.horizon = horizon;
  c.preset = preset;
  c.n_priors = n_priors;
  c.model = models::default_config(kind, horizon);
  return c;
}

FittedPipeline::FittedPipeline(PipelineConfig config, preprocess::TransformState transform,
                               models::TrainedModel model, std::size_t training_rows)
    : config_(std::move(config)),
      transform_(std::move(transform)),
      model_(std::move(model)),
      training_rows_(training_rows) {}

FittedPipeline FittedPipeline::fit(const PipelineConfig& config, const features::FeatureMatrix& train,
                                   std::uint64_t seed) {
  auto prep = preprocess::fit_preprocessing(train.features, train.target, train.column_names, config.preprocess);
  const Matrix x = preprocess::zscore_apply(prep.state.standardization, take_rows(train.features, prep.kept_rows));
  const Vector y = preprocess::forward_target(prep.state, take_rows(train.target, prep.kept_rows));
  auto model = models::fit(config.model, x, y, train.column_names, seed);
  return FittedPipeline(config, std::move(prep.state), std::move(model), prep.kept_rows.size());
}

Vector FittedPipeline::predict_kwh(const Matrix& raw_features) const {
  if (static_cast<std::size_t>(raw_features.cols()) != columns().size()) {
    throw Error(Errc::SchemaMismatch, "pipeline expects " + std::to_string(columns().size()) + " columns, got " +
                                          std::to_string(raw_features.cols()));
  }
  const Matrix x = preprocess::zscore_apply(transform_.standardization, raw_features);
  return preprocess::inverse_target(transform_, model_.predict(x));
}

Vector FittedPipeline::predict_kwh(const features::FeatureMatrix& data) const {
  if (data.column_names != columns()) {
    // Delegate for the descriptive message.
    model_.predict(Matrix(0, static_cast<Eigen::Index>(data.cols())), data.column_names);
  }
  return predict_kwh(data.features);
}

void FittedPipeline::to_json(nlohmann::json& j) const {
  nlohmann::json transform;
  preprocess::to_json(transform, transform_);
  nlohmann::json model;
  model_.to_json(model);
  j = {{"format", kFormat},
       {"version", kFormatVersion},
       {"horizon", dataio::to_string(config_.horizon)},
       {"features", features::to_string(config_.preset)},
       {"n_priors", config_.n_priors},
       {"columns", columns()},
       {"preprocess",
        {{"sqrt_target", config_.preprocess.sqrt_target}, {"drop_outliers", config_.preprocess.drop_outliers}}},
       {"training_rows", training_rows_},
       {"transform", transform},
       {"model", model}};
}

FittedPipeline FittedPipeline::from_json(const nlohmann::json& j) {
  if (j.value("format", std::string()) != kFormat) throw Error(Errc::SchemaMismatch, "not a solarcast model file");
  if (j.value("version", 0) != kFormatVersion) throw Error(Errc::SchemaMismatch, "unsupported model file version");
  PipelineConfig config;
  const auto horizon = dataio::parse_time_frame(j.at("horizon").get<std::string>());
  const auto preset = features::parse_preset(j.at("features").get<std::string>());
  if (!horizon || !preset) throw Error(Errc::SchemaMismatch, "model file has an unknown horizon or feature preset");
  config.horizon = *horizon;
  config.preset = *preset;
  config.n_priors = j.at("n_priors").get<std::size_t>();
  config.preprocess.sqrt_target = j.at("preprocess").at("sqrt_target").get<bool>();
  config.preprocess.drop_outliers = j.at("preprocess").at("drop_outliers").get<bool>();
  preprocess::TransformState transform;
  preprocess::from_json(j.at("transform"), transform);
  auto model = models::TrainedModel::from_json(j.at("model"));
  config.model = model.config();
  if (transform.standardization.mean.size() != model.schema().size()) {
    throw Error(Errc::SchemaMismatch, "standardization and model disagree on the column count");
  }
  return FittedPipeline(std::move(config), std::move(transform), std::move(model), j.value("training_rows", std::size_t{0}));
}

HoldoutResult run_holdout(const PipelineConfig& config, const features::FeatureMatrix& data, const SplitSpec& split_spec,
                          std::uint64_t seed) {
  auto indices = split(data.rows(), split_spec);
  const auto train = data.take(indices.train);
  const auto test = data.take(indices.test);
  auto pipeline = FittedPipeline::fit(config, train, seed);
  Vector predicted = pipeline.predict_kwh(test);
  auto report = metrics(test.target, predicted);
  return {std::move(pipeline), std::move(indices), test.target, std::move(predicted), report};
}

}  // namespace solarcast::evaluate
