#pragma once

#include "solarcast/evaluate/pipeline.hpp"
#include "solarcast/features.hpp"
#include "solarcast/models/config.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace solarcast::evaluate {

enum class SearchMode { Random, Exhaustive };

/// Candidate values per hyperparameter, keyed by the names used in the
/// model's JSON config. Unlisted hyperparameters keep the base values.
struct SearchSpace {
  models::ModelConfig base;
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> parameters;
  std::size_t n_iterations = 50;
  std::uint64_t seed = 42;
  SearchMode mode = SearchMode::Random;

  std::size_t size() const;  // number of distinct configurations
};

/// Candidates around the tuned values for `kind` at `horizon`.
SearchSpace default_search_space(models::ModelKind kind, dataio::TimeFrame horizon);

struct SearchTrial {
  models::ModelConfig config;
  double score = 0.0;  // -inf when the fit failed or diverged
};

struct SearchResult {
  models::ModelConfig best;
  double best_score = 0.0;
  std::size_t best_index = 0;
  std::vector<SearchTrial> trace;
};

/// Configuration `index` of the cartesian product, first parameter slowest.
models::ModelConfig configuration_at(const SearchSpace& space, std::size_t index);

using ConfigScorer = std::function<double(const models::ModelConfig&)>;

/// Random mode draws each hyperparameter uniformly from its candidates,
/// n_iterations times. Exhaustive mode walks the whole product in order.
/// The highest score wins; ties keep the earlier trial. Throws EmptySpace.
SearchResult random_search(const SearchSpace& space, const ConfigScorer& score);

/// Scores by `folds`-fold CV R^2 on `train` with the rest of `pipeline`
/// held fixed.
SearchResult random_search(const SearchSpace& space, const features::FeatureMatrix& train,
                           const PipelineConfig& pipeline, std::size_t folds = 3, std::size_t threads = 0);

void to_json(nlohmann::json& j, const SearchResult& result);

}  // namespace solarcast::evaluate
