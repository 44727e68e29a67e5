#include "solarcast/models/random_forest.hpp"

#include "solarcast/error.hpp"
#include "solarcast/parallel.hpp"
#include "solarcast/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace solarcast::models {

std::size_t features_per_split(MaxFeatures rule, std::size_t n_features) {
  if (n_features == 0) return 0;
  const auto f = static_cast<double>(n_features);
  switch (rule) {
    case MaxFeatures::Log2: return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::log2(f))));
    case MaxFeatures::Sqrt: return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(f))));
    case MaxFeatures::All: return n_features;
  }
  return n_features;
}

namespace {

struct Candidate {
  bool found = false;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum_L^2/n_L + sum_R^2/n_R, larger is better
};

struct Pending {
  std::size_t node;
  std::size_t begin;
  std::size_t end;
  std::size_t depth;
};

class CartBuilder {
 public:
  CartBuilder(const RfConfig& config, const Matrix& x, const Vector& y, std::uint64_t seed)
      : config_(config), x_(x), y_(y), rng_(seed), mtry_(features_per_split(config.max_features, static_cast<std::size_t>(x.cols()))) {
    order_.resize(static_cast<std::size_t>(x.cols()));
    for (std::size_t f = 0; f < order_.size(); ++f) order_[f] = f;
  }

  RegressionTree build(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    nodes_.clear();
    nodes_.emplace_back();
    std::vector<Pending> stack{{0, 0, rows_.size(), 0}};
    while (!stack.empty()) {
      const auto job = stack.back();
      stack.pop_back();
      const auto split = try_split(job);
      if (!split.found) {
        nodes_[job.node].value = mean(job.begin, job.end);
        continue;
      }
      const auto mid = static_cast<std::size_t>(
          std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(job.begin), rows_.begin() + static_cast<std::ptrdiff_t>(job.end),
                         [&](std::size_t r) { return x_(static_cast<Eigen::Index>(r), split.feature) <= split.threshold; }) -
          rows_.begin());
      const auto left = nodes_.size();
      nodes_[job.node].feature = split.feature;
      nodes_[job.node].threshold = split.threshold;
      nodes_[job.node].left = static_cast<std::int32_t>(left);
      nodes_.emplace_back();
      nodes_.emplace_back();
      stack.push_back({left + 1, mid, job.end, job.depth + 1});
      stack.push_back({left, job.begin, mid, job.depth + 1});
    }
    return RegressionTree(std::move(nodes_));
  }

 private:
  double mean(std::size_t begin, std::size_t end) const {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += y_[static_cast<Eigen::Index>(rows_[i])];
    return s / static_cast<double>(end - begin);
  }

  Candidate try_split(const Pending& job) {
    Candidate best;
    const std::size_t n = job.end - job.begin;
    if (n < config_.min_samples_split) return best;
    if (config_.max_depth && job.depth >= *config_.max_depth) return best;
    const double y0 = y_[static_cast<Eigen::Index>(rows_[job.begin])];
    bool pure = true;
    for (std::size_t i = job.begin; i < job.end && pure; ++i) pure = y_[static_cast<Eigen::Index>(rows_[i])] == y0;
    if (pure) return best;

    // Features are visited in random order; those constant within the node
    // do not count toward the per-node budget.
    std::size_t evaluated = 0;
    for (std::size_t k = 0; k < order_.size() && evaluated < mtry_; ++k) {
      std::swap(order_[k], order_[k + rng_.index(order_.size() - k)]);
      const auto f = static_cast<Eigen::Index>(order_[k]);
      pairs_.clear();
      for (std::size_t i = job.begin; i < job.end; ++i) {
        const auto r = static_cast<Eigen::Index>(rows_[i]);
        pairs_.emplace_back(x_(r, f), y_[r]);
      }
      std::sort(pairs_.begin(), pairs_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      if (pairs_.front().first == pairs_.back().first) continue;
      ++evaluated;
      double total = 0.0;
      for (const auto& p : pairs_) total += p.second;
      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += pairs_[i].second;
        if (pairs_[i].first == pairs_[i + 1].first) continue;
        const auto nl = static_cast<double>(i + 1);
        const auto nr = static_cast<double>(n - i - 1);
        const double right_sum = total - left_sum;
        const double score = left_sum * left_sum / nl + right_sum * right_sum / nr;
        if (!best.found || score > best.score) {
          best.found = true;
          best.score = score;
          best.feature = static_cast<std::int32_t>(f);
          best.threshold = split_threshold(pairs_[i].first, pairs_[i + 1].first);
        }
      }
    }
    return best;
  }

  const RfConfig& config_;
  const Matrix& x_;
  const Vector& y_;
  Rng rng_;
  std::size_t mtry_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rows_;
  std::vector<RegressionTree::Node> nodes_;
  std::vector<std::pair<double, double>> pairs_;
};

}  // namespace

RegressionTree grow_cart_tree(const RfConfig& config, const Matrix& features, const Vector& target,
                              std::vector<std::size_t> rows, std::uint64_t seed) {
  if (rows.empty()) throw Error(Errc::TooFewRows, "cannot grow a tree on zero rows");
  CartBuilder builder(config, features, target, seed);
  return builder.build(std::move(rows));
}

RandomForestModel RandomForestModel::fit(const RfConfig& config, const Matrix& features, const Vector& target,
                                         std::uint64_t seed, std::size_t threads) {
  validate(config);
  if (features.rows() != target.size()) throw Error(Errc::ColumnMismatch, "rf: feature rows and target length differ");
  if (features.rows() < 2) throw Error(Errc::TooFewRows, "rf: need at least 2 rows");
  const auto n = static_cast<std::size_t>(features.rows());
  std::vector<RegressionTree> trees(config.n_estimators);
  parallel_for(
      config.n_estimators,
      [&](std::size_t t) {
        Rng rng(seed, t);
        std::vector<std::size_t> rows(n);
        for (auto& r : rows) r = rng.index(n);
        trees[t] = grow_cart_tree(config, features, target, std::move(rows), rng.next());
      },
      threads);
  return RandomForestModel(std::move(trees));
}

Vector RandomForestModel::predict(const Matrix& features) const {
  Vector out = Vector::Zero(features.rows());
  if (trees_.empty()) return out;
  // Tree-major keeps one tree hot in cache; each row still sums trees in order.
  for (const auto& t : trees_) {
    for (Eigen::Index r = 0; r < features.rows(); ++r) out[r] += t.predict(row_span(features, r));
  }
  return out / static_cast<double>(trees_.size());
}

void RandomForestModel::to_json(nlohmann::json& j) const {
  j = {{"trees", nlohmann::json::array()}};
  for (const auto& t : trees_) {
    nlohmann::json tj;
    t.to_json(tj);
    j["trees"].push_back(std::move(tj));
  }
}

RandomForestModel RandomForestModel::from_json(const nlohmann::json& j) {
  std::vector<RegressionTree> trees;
  for (const auto& tj : j.at("trees")) trees.push_back(RegressionTree::from_json(tj));
  if (trees.empty()) throw Error(Errc::ParseError, "rf: no trees stored");
  return RandomForestModel(std::move(trees));
}

}  // namespace solarcast::models
