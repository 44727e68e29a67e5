#include "solarcast/models/gbt.hpp"

#include "solarcast/error.hpp"
#include "solarcast/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace solarcast::models {

namespace {

double score_term(double g, double h, double lambda) noexcept {
  const double denom = h + lambda;
  return denom > 0.0 ? g * g / denom : 0.0;
}

struct NodeStats {
  double grad = 0.0;
  double hess = 0.0;
};

struct BestSplit {
  double gain = 0.0;
  std::int32_t feature = -1;
  double threshold = 0.0;
};

// Per-node sweep state while scanning one presorted column.
struct Sweep {
  double grad_left = 0.0;
  double hess_left = 0.0;
  double last_value = 0.0;
  bool seen = false;
};

}  // namespace

double gbt_split_gain(double grad_left, double hess_left, double grad_right, double hess_right, double lambda,
                      double gamma) noexcept {
  const double g = grad_left + grad_right;
  const double h = hess_left + hess_right;
  return 0.5 * (score_term(grad_left, hess_left, lambda) + score_term(grad_right, hess_right, lambda) -
                score_term(g, h, lambda)) -
         gamma;
}

double gbt_leaf_weight(double grad_sum, double hess_sum, double lambda) noexcept {
  const double denom = hess_sum + lambda;
  return denom > 0.0 ? -grad_sum / denom : 0.0;
}

GbtModel GbtModel::fit(const GbtConfig& config, const Matrix& features, const Vector& target, std::uint64_t seed) {
  validate(config);
  if (features.rows() != target.size()) throw Error(Errc::ColumnMismatch, "gbt: feature rows and target length differ");
  if (features.rows() < 2) throw Error(Errc::TooFewRows, "gbt: need at least 2 rows");
  const auto n = static_cast<std::size_t>(features.rows());
  const auto n_features = static_cast<std::size_t>(features.cols());

  std::vector<std::vector<std::uint32_t>> sorted(n_features);
  for (std::size_t f = 0; f < n_features; ++f) {
    auto& idx = sorted[f];
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0U);
    const auto col = static_cast<Eigen::Index>(f);
    std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) { return features(a, col) < features(b, col); });
  }

  GbtModel model;
  model.base_score_ = target.mean();
  Vector pred = Vector::Constant(target.size(), model.base_score_);

  const auto n_sample = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(config.subsample * static_cast<double>(n))), 1, n);
  std::vector<double> grad(n);
  std::vector<std::int32_t> position(n);  // active node of each row, -1 when out of the round's sample
  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);

  for (std::size_t round = 0; round < config.n_estimators; ++round) {
    std::fill(position.begin(), position.end(), -1);
    if (n_sample == n) {
      std::fill(position.begin(), position.end(), 0);
    } else {
      Rng rng(seed, round);
      auto perm = all_rows;
      // Partial Fisher-Yates: the first n_sample slots are a uniform sample.
      for (std::size_t i = 0; i < n_sample; ++i) std::swap(perm[i], perm[i + rng.index(n - i)]);
      for (std::size_t i = 0; i < n_sample; ++i) position[perm[i]] = 0;
    }
    for (std::size_t i = 0; i < n; ++i) grad[i] = pred[static_cast<Eigen::Index>(i)] - target[static_cast<Eigen::Index>(i)];

    std::vector<RegressionTree::Node> nodes(1);
    std::vector<NodeStats> stats(1);
    for (std::size_t i = 0; i < n; ++i) {
      if (position[i] == 0) {
        stats[0].grad += grad[i];
        stats[0].hess += 1.0;
      }
    }
    std::vector<std::int32_t> frontier{0};

    for (std::size_t depth = 0; depth < config.max_depth && !frontier.empty(); ++depth) {
      // frontier nodes are contiguous in creation order; map node -> slot.
      const auto first = frontier.front();
      std::vector<BestSplit> best(frontier.size());
      std::vector<Sweep> sweep(frontier.size());
      for (std::size_t f = 0; f < n_features; ++f) {
        std::fill(sweep.begin(), sweep.end(), Sweep{});
        const auto col = static_cast<Eigen::Index>(f);
        for (const auto r : sorted[f]) {
          const auto node = position[r];
          if (node < first) continue;
          const auto slot = static_cast<std::size_t>(node - first);
          auto& s = sweep[slot];
          const double v = features(r, col);
          if (s.seen && v != s.last_value) {
            const auto& total = stats[static_cast<std::size_t>(node)];
            const double gr = total.grad - s.grad_left;
            const double hr = total.hess - s.hess_left;
            if (s.hess_left >= config.min_child_weight && hr >= config.min_child_weight) {
              const double gain = gbt_split_gain(s.grad_left, s.hess_left, gr, hr, config.lambda, config.gamma);
              if (gain > best[slot].gain) {
                best[slot] = {gain, static_cast<std::int32_t>(f), split_threshold(s.last_value, v)};
              }
            }
          }
          s.grad_left += grad[r];
          s.hess_left += 1.0;
          s.last_value = v;
          s.seen = true;
        }
      }

      std::vector<std::int32_t> next;
      for (std::size_t slot = 0; slot < frontier.size(); ++slot) {
        if (best[slot].feature < 0) continue;
        const auto node = static_cast<std::size_t>(frontier[slot]);
        const auto left = static_cast<std::int32_t>(nodes.size());
        nodes[node].feature = best[slot].feature;
        nodes[node].threshold = best[slot].threshold;
        nodes[node].left = left;
        nodes.emplace_back();
        nodes.emplace_back();
        stats.emplace_back();
        stats.emplace_back();
        next.push_back(left);
        next.push_back(left + 1);
      }
      if (next.empty()) break;
      for (std::size_t i = 0; i < n; ++i) {
        const auto node = position[i];
        if (node < first) continue;
        const auto& parent = nodes[static_cast<std::size_t>(node)];
        if (parent.is_leaf()) {
          position[i] = -1;  // settled in a leaf; its stats are final
          continue;
        }
        const auto child = parent.left + (features(static_cast<Eigen::Index>(i), parent.feature) <= parent.threshold ? 0 : 1);
        position[i] = child;
        stats[static_cast<std::size_t>(child)].grad += grad[i];
        stats[static_cast<std::size_t>(child)].hess += 1.0;
      }
      frontier = std::move(next);
    }

    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (nodes[k].is_leaf()) {
        nodes[k].value = config.learning_rate * gbt_leaf_weight(stats[k].grad, stats[k].hess, config.lambda);
      }
    }
    RegressionTree tree(std::move(nodes));
    double sse = 0.0;
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
      pred[i] += tree.predict(row_span(features, i));
      const double e = pred[i] - target[i];
      sse += e * e;
    }
    model.trees_.push_back(std::move(tree));
    const double mse = sse / static_cast<double>(n);
    if (!std::isfinite(mse)) throw Error(Errc::NonFiniteLoss, "gbt: training loss is not finite at round " + std::to_string(round));
    model.loss_curve_.push_back(mse);
  }
  return model;
}

Vector GbtModel::predict(const Matrix& features) const {
  Vector out = Vector::Constant(features.rows(), base_score_);
  for (const auto& t : trees_) {
    for (Eigen::Index r = 0; r < features.rows(); ++r) out[r] += t.predict(row_span(features, r));
  }
  return out;
}

void GbtModel::to_json(nlohmann::json& j) const {
  j = {{"base_score", base_score_}, {"trees", nlohmann::json::array()}};
  for (const auto& t : trees_) {
    nlohmann::json tj;
    t.to_json(tj);
    j["trees"].push_back(std::move(tj));
  }
}

GbtModel GbtModel::from_json(const nlohmann::json& j) {
  GbtModel m;
  m.base_score_ = j.at("base_score").get<double>();
  for (const auto& tj : j.at("trees")) m.trees_.push_back(RegressionTree::from_json(tj));
  return m;
}

}  // namespace solarcast::models
