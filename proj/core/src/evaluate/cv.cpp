#include "solarcast/evaluate/cv.hpp"

#include "solarcast/error.hpp"
#include "solarcast/parallel.hpp"
#include "solarcast/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace solarcast::evaluate {

namespace {

constexpr std::uint64_t kFoldStream = 0x6b666f6c64ULL;

}  // namespace

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n_rows, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(Errc::InvalidArgument, "k-fold needs k >= 2");
  if (n_rows < k) throw Error(Errc::TooFewRows, std::to_string(n_rows) + " rows cannot fill " + std::to_string(k) + " folds");
  Rng rng(seed, kFoldStream);
  const auto perm = rng.permutation(n_rows);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t start = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n_rows / k + (f < n_rows % k ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(start), perm.begin() + static_cast<std::ptrdiff_t>(start + size));
    std::sort(folds[f].begin(), folds[f].end());
    start += size;
  }
  return folds;
}

CvResult kfold_cv(const FoldModel& model, const features::FeatureMatrix& data, std::size_t k, std::uint64_t seed,
                  std::size_t threads) {
  CvResult result;
  result.k = k;
  result.folds = kfold_indices(data.rows(), k, seed);
  result.fold_scores.assign(k, 0.0);
  parallel_for(
      k,
      [&](std::size_t f) {
        std::vector<bool> held(data.rows(), false);
        for (auto r : result.folds[f]) held[r] = true;
        std::vector<std::size_t> train_rows;
        for (std::size_t r = 0; r < data.rows(); ++r) {
          if (!held[r]) train_rows.push_back(r);
        }
        const auto train = data.take(train_rows);
        const auto test = data.take(result.folds[f]);
        const Vector predicted = model(train, test, stream_seed(seed, f));
        result.fold_scores[f] = features::r2_score(test.target, predicted);
      },
      threads);
  double sum = 0.0;
  for (double s : result.fold_scores) sum += s;
  result.mean = sum / static_cast<double>(k);
  return result;
}

CvResult kfold_cv(const PipelineConfig& config, const features::FeatureMatrix& data, std::size_t k, std::uint64_t seed,
                  std::size_t threads) {
  return kfold_cv(
      [&config](const features::FeatureMatrix& train, const features::FeatureMatrix& test, std::uint64_t fold_seed) {
        return FittedPipeline::fit(config, train, fold_seed).predict_kwh(test);
      },
      data, k, seed, threads);
}

void to_json(nlohmann::json& j, const CvResult& r) {
  std::vector<std::size_t> sizes;
  for (const auto& f : r.folds) sizes.push_back(f.size());
  j = {{"k", r.k}, {"scoring", "r2"}, {"fold_scores", r.fold_scores}, {"fold_sizes", sizes}, {"mean", r.mean}};
}

}  // namespace solarcast::evaluate
