#pragma once

#include "solarcast/matrix.hpp"
#include "solarcast/models/config.hpp"
#include "solarcast/models/gbt.hpp"
#include "solarcast/models/knn.hpp"
#include "solarcast/models/mlp.hpp"
#include "solarcast/models/random_forest.hpp"
#include "solarcast/models/svr.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace solarcast::models {

struct FitDiagnostics {
  std::vector<double> loss_curve;  // MLP epochs, GBT rounds
  std::size_t support_vectors = 0;
  std::size_t solver_iterations = 0;
  std::vector<std::string> warnings;
};

/// A fitted regressor plus the column schema it was trained on.
class TrainedModel {
 public:
  using Params = std::variant<KnnModel, RandomForestModel, GbtModel, MlpModel, SvrModel>;

  TrainedModel(ModelConfig config, Params params, std::vector<std::string> schema,
               std::uint64_t seed, FitDiagnostics diagnostics = {});

  ModelKind kind() const noexcept { return kind_of(config_); }
  const ModelConfig& config() const noexcept { return config_; }
  const Params& params() const noexcept { return params_; }
  const std::vector<std::string>& schema() const noexcept { return schema_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const FitDiagnostics& diagnostics() const noexcept { return diagnostics_; }
  std::size_t n_features() const noexcept { return schema_.size(); }

  /// Checks the column count only.
  Vector predict(const Matrix& features) const;
  /// Checks column names and order against the fit-time schema.
  Vector predict(const Matrix& features, std::span<const std::string> columns) const;

  void to_json(nlohmann::json& j) const;
  static TrainedModel from_json(const nlohmann::json& j);

 private:
  ModelConfig config_;
  Params params_;
  std::vector<std::string> schema_;
  std::uint64_t seed_ = 0;
  FitDiagnostics diagnostics_;
};

/// Fits `config` on standardized features and a (transformed) target.
/// Throws NonFiniteInput, TooFewRows (< 2 rows), NonFiniteLoss (MLP divergence).
TrainedModel fit(const ModelConfig& config, const Matrix& features, const Vector& target,
                 std::vector<std::string> schema, std::uint64_t seed);

inline Vector predict(const TrainedModel& model, const Matrix& features,
                      std::span<const std::string> columns) {
  return model.predict(features, columns);
}

}  // namespace solarcast::models
