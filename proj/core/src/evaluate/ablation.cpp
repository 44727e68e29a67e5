#include "solarcast/evaluate/ablation.hpp"

#include "solarcast/error.hpp"
#include "solarcast/evaluate/pipeline.hpp"
#include "solarcast/parallel.hpp"

namespace solarcast::evaluate {

const AblationCell* AblationResult::find(models::ModelKind model, dataio::TimeFrame horizon, std::size_t n_priors) const {
  for (const auto& c : cells) {
    if (c.model == model && c.horizon == horizon && c.n_priors == n_priors) return &c;
  }
  return nullptr;
}

AblationResult ablate_priors(std::span<const models::ModelKind> kinds, std::span<const dataio::AlignedFrame> frames,
                             const AblationOptions& options) {
  if (options.max_priors > features::kMaxPriors) {
    throw Error(Errc::InvalidArgument, "at most " + std::to_string(features::kMaxPriors) + " priors");
  }
  AblationResult result;
  struct Job {
    const dataio::AlignedFrame* frame;
  };
  std::vector<Job> jobs;
  for (auto kind : kinds) {
    for (const auto& frame : frames) {
      for (std::size_t k = 0; k <= options.max_priors; ++k) {
        result.cells.push_back({kind, frame.frame, k, {}});
        jobs.push_back({&frame});
      }
    }
  }
  parallel_for(
      result.cells.size(),
      [&](std::size_t i) {
        auto& cell = result.cells[i];
        PipelineConfig config = default_pipeline(cell.model, cell.horizon, options.preset, cell.n_priors);
        if (options.config) config.model = options.config(cell.model, cell.horizon);
        const auto data = features::build_features(*jobs[i].frame, options.preset, cell.n_priors);
        cell.metrics = run_holdout(config, data, options.split, options.seed).metrics;
      },
      options.threads);
  return result;
}

}  // namespace solarcast::evaluate
