#include "solarcast/evaluate/search.hpp"

#include "solarcast/error.hpp"
#include "solarcast/evaluate/cv.hpp"
#include "solarcast/rng.hpp"

#include <cmath>
#include <limits>

namespace solarcast::evaluate {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSearchStream = 0x736561726368ULL;

void check_nonempty(const SearchSpace& space) {
  if (space.parameters.empty()) throw Error(Errc::EmptySpace, "search space lists no hyperparameters");
  for (const auto& [name, values] : space.parameters) {
    if (values.empty()) throw Error(Errc::EmptySpace, "hyperparameter '" + name + "' has no candidates");
  }
  if (space.mode == SearchMode::Random && space.n_iterations == 0) {
    throw Error(Errc::EmptySpace, "random search needs at least one iteration");
  }
}

models::ModelConfig overlay(const SearchSpace& space, const std::vector<std::size_t>& choice) {
  json j;
  models::to_json(j, space.base);
  for (std::size_t p = 0; p < space.parameters.size(); ++p) {
    const auto& [name, values] = space.parameters[p];
    if (!j.contains(name)) throw Error(Errc::InvalidArgument, "model config has no hyperparameter '" + name + "'");
    j[name] = values[choice[p]];
  }
  auto config = models::config_from_json(j);
  models::validate(config);
  return config;
}

}  // namespace

std::size_t SearchSpace::size() const {
  std::size_t n = parameters.empty() ? 0 : 1;
  for (const auto& p : parameters) n *= p.second.size();
  return n;
}

models::ModelConfig configuration_at(const SearchSpace& space, std::size_t index) {
  check_nonempty(space);
  if (index >= space.size()) throw Error(Errc::InvalidArgument, "configuration index out of range");
  std::vector<std::size_t> choice(space.parameters.size());
  for (std::size_t p = space.parameters.size(); p-- > 0;) {
    const auto radix = space.parameters[p].second.size();
    choice[p] = index % radix;
    index /= radix;
  }
  return overlay(space, choice);
}

SearchSpace default_search_space(models::ModelKind kind, dataio::TimeFrame horizon) {
  SearchSpace s;
  s.base = models::default_config(kind, horizon);
  switch (kind) {
    case models::ModelKind::Knn:
      s.parameters = {{"n_neighbours", {1, 2, 3, 5, 7, 10}}, {"p", {1.0, 2.0}}, {"weights", {"uniform", "distance"}}};
      break;
    case models::ModelKind::RandomForest:
      s.parameters = {{"n_estimators", {100, 200, 300, 350}},
                      {"max_features", {"log2", "sqrt", "all"}},
                      {"max_depth", {nullptr, 10, 20}}};
      break;
    case models::ModelKind::Gbt:
      s.parameters = {{"n_estimators", {100, 250, 300, 450}},
                      {"learning_rate", {0.05, 0.1, 0.2}},
                      {"subsample", {0.6, 0.8, 1.0}},
                      {"max_depth", {3, 5, 10}},
                      {"gamma", {0.0, 0.1, 0.5}}};
      break;
    case models::ModelKind::Mlp:
      s.parameters = {{"hidden_layer_sizes", {json::array({80, 80}), json::array({80, 80, 80, 80}), json::array({85, 65}), json::array({100})}},
                      {"alpha", {1e-4, 1e-3}},
                      {"learning_rate_init", {0.001, 0.01}}};
      break;
    case models::ModelKind::Svr:
      s.parameters = {{"gamma", {0.2, 0.4, 0.6, 0.8, 1.0}}, {"C", {1.0, 2.0, 4.0, 5.0, 8.0}}, {"epsilon", {0.05, 0.1, 0.2}}};
      break;
  }
  return s;
}

SearchResult random_search(const SearchSpace& space, const ConfigScorer& score) {
  check_nonempty(space);
  std::vector<models::ModelConfig> candidates;
  if (space.mode == SearchMode::Exhaustive) {
    for (std::size_t i = 0; i < space.size(); ++i) candidates.push_back(configuration_at(space, i));
  } else {
    Rng rng(space.seed, kSearchStream);
    std::vector<std::size_t> choice(space.parameters.size());
    for (std::size_t it = 0; it < space.n_iterations; ++it) {
      for (std::size_t p = 0; p < choice.size(); ++p) choice[p] = rng.index(space.parameters[p].second.size());
      candidates.push_back(overlay(space, choice));
    }
  }

  SearchResult result;
  result.best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double s = -std::numeric_limits<double>::infinity();
    try {
      s = score(candidates[i]);
    } catch (const Error&) {
      // A failed or diverged fit ranks below every finite score.
    }
    if (!std::isfinite(s)) s = -std::numeric_limits<double>::infinity();
    result.trace.push_back({candidates[i], s});
    if (i == 0 || s > result.best_score) {
      result.best_score = s;
      result.best_index = i;
    }
  }
  result.best = result.trace[result.best_index].config;
  return result;
}

SearchResult random_search(const SearchSpace& space, const features::FeatureMatrix& train,
                           const PipelineConfig& pipeline, std::size_t folds, std::size_t threads) {
  return random_search(space, [&](const models::ModelConfig& config) {
    auto p = pipeline;
    p.model = config;
    return kfold_cv(p, train, folds, space.seed, threads).mean;
  });
}

void to_json(json& j, const SearchResult& r) {
  auto score = [](double s) { return std::isfinite(s) ? json(s) : json(nullptr); };
  json best;
  models::to_json(best, r.best);
  j = {{"best", best}, {"best_score", score(r.best_score)}, {"best_index", r.best_index}, {"trace", json::array()}};
  for (const auto& t : r.trace) {
    json c;
    models::to_json(c, t.config);
    j["trace"].push_back({{"config", c}, {"score", score(t.score)}});
  }
}

}  // namespace solarcast::evaluate
