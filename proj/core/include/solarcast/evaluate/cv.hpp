#pragma once

#include "solarcast/evaluate/pipeline.hpp"
#include "solarcast/features.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace solarcast::evaluate {

struct CvResult {
  std::vector<double> fold_scores;  // R^2 in kWh on each held-out fold
  double mean = 0.0;
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> folds;  // held-out rows per fold, ascending
};

/// Seeded shuffle cut into k contiguous folds whose sizes differ by at most
/// one. Throws TooFewRows when n < k and InvalidArgument when k < 2.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n_rows, std::size_t k, std::uint64_t seed);

/// Fits on the training part of one fold and predicts the held-out part, in
/// kWh. `seed` is the fold's own stream.
using FoldModel = std::function<Vector(const features::FeatureMatrix& train, const features::FeatureMatrix& test,
                                       std::uint64_t seed)>;

CvResult kfold_cv(const FoldModel& model, const features::FeatureMatrix& data, std::size_t k, std::uint64_t seed,
                  std::size_t threads = 0);

/// Refits the whole pipeline, preprocessing included, inside every fold.
CvResult kfold_cv(const PipelineConfig& config, const features::FeatureMatrix& data, std::size_t k,
                  std::uint64_t seed, std::size_t threads = 0);

void to_json(nlohmann::json& j, const CvResult& result);

}  // namespace solarcast::evaluate
