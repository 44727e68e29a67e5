#pragma once

#include "solarcast/dataio.hpp"
#include "solarcast/evaluate/metrics.hpp"
#include "solarcast/evaluate/split.hpp"
#include "solarcast/features.hpp"
#include "solarcast/models/trained_model.hpp"
#include "solarcast/preprocess.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace solarcast::evaluate {

/// Everything needed to turn an aligned frame into a fitted predictor.
struct PipelineConfig {
  dataio::TimeFrame horizon = dataio::TimeFrame::OneHour;
  features::Preset preset = features::Preset::Full;
  std::size_t n_priors = 1;
  models::ModelConfig model;
  preprocess::PreprocessOptions preprocess;
};

/// The tuned model configuration for `kind` at `horizon`.
PipelineConfig default_pipeline(models::ModelKind kind, dataio::TimeFrame horizon,
                                features::Preset preset = features::Preset::Full, std::size_t n_priors = 1);

/// Raw features in, kWh out: standardization, model, inverse target
/// transform.
class FittedPipeline {
 public:
  /// Fits the preprocessing on `train` only, then the model on the
  /// surviving rows.
  static FittedPipeline fit(const PipelineConfig& config, const features::FeatureMatrix& train, std::uint64_t seed);

  /// Column count must match.
  Vector predict_kwh(const Matrix& raw_features) const;
  /// Column names and order must match; throws SchemaMismatch otherwise.
  Vector predict_kwh(const features::FeatureMatrix& data) const;

  const PipelineConfig& config() const noexcept { return config_; }
  const preprocess::TransformState& transform() const noexcept { return transform_; }
  const models::TrainedModel& model() const noexcept { return model_; }
  const std::vector<std::string>& columns() const noexcept { return model_.schema(); }
  std::size_t training_rows() const noexcept { return training_rows_; }

  void to_json(nlohmann::json& j) const;
  static FittedPipeline from_json(const nlohmann::json& j);

 private:
  FittedPipeline(PipelineConfig config, preprocess::TransformState transform, models::TrainedModel model,
                 std::size_t training_rows);

  PipelineConfig config_;
  preprocess::TransformState transform_;
  models::TrainedModel model_;
  std::size_t training_rows_ = 0;
};

struct HoldoutResult {
  FittedPipeline pipeline;
  SplitIndices split;
  Vector actual_kwh;
  Vector predicted_kwh;
  MetricsReport metrics;
};

/// split -> fit on train -> metrics on test, all in kWh.
HoldoutResult run_holdout(const PipelineConfig& config, const features::FeatureMatrix& data, const SplitSpec& split,
                          std::uint64_t seed);

}  // namespace solarcast::evaluate
