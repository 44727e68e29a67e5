#pragma once

#include "solarcast/dataio.hpp"
#include "solarcast/evaluate/metrics.hpp"
#include "solarcast/evaluate/split.hpp"
#include "solarcast/features.hpp"
#include "solarcast/models/config.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace solarcast::evaluate {

struct AblationCell {
  models::ModelKind model = models::ModelKind::RandomForest;
  dataio::TimeFrame horizon = dataio::TimeFrame::OneHour;
  std::size_t n_priors = 0;
  MetricsReport metrics;
};

struct AblationResult {
  std::vector<AblationCell> cells;  // model-major, then horizon, then n_priors

  const AblationCell* find(models::ModelKind model, dataio::TimeFrame horizon, std::size_t n_priors) const;
};

struct AblationOptions {
  std::size_t max_priors = features::kMaxPriors;
  features::Preset preset = features::Preset::Full;
  SplitSpec split;
  std::uint64_t seed = 42;
  /// Model configuration per cell; the tuned defaults when empty.
  std::function<models::ModelConfig(models::ModelKind, dataio::TimeFrame)> config;
  std::size_t threads = 0;
};

/// For every model, every frame and n_priors = 0..max_priors: rebuild the
/// features, split, fit and score exactly as a single holdout run would.
AblationResult ablate_priors(std::span<const models::ModelKind> kinds, std::span<const dataio::AlignedFrame> frames,
                             const AblationOptions& options);

}  // namespace solarcast::evaluate
