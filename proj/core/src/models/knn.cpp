#include "solarcast/models/knn.hpp"

#include "codec.hpp"
#include "solarcast/error.hpp"
#include "solarcast/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

namespace solarcast::models {

KnnModel KnnModel::fit(const KnnConfig& config, const Matrix& features, const Vector& target) {
  validate(config);
  if (features.rows() != target.size()) throw Error(Errc::ColumnMismatch, "knn: feature rows and target length differ");
  if (features.rows() == 0) throw Error(Errc::TooFewRows, "knn: no training rows");
  KnnModel m;
  m.config_ = config;
  m.train_ = features;
  m.target_ = target;
  return m;
}

double KnnModel::distance(std::span<const double> a, std::span<const double> b) const {
  const double p = config_.p;
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
  }
  if (p == 2.0) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(acc, 1.0 / p);
}

std::vector<std::size_t> KnnModel::neighbours(std::span<const double> query) const {
  if (query.size() != static_cast<std::size_t>(train_.cols())) {
    throw Error(Errc::ColumnMismatch, "knn: query has " + std::to_string(query.size()) + " columns, model has " +
                                          std::to_string(train_.cols()));
  }
  const auto n = static_cast<std::size_t>(train_.rows());
  const std::size_t k = std::min(config_.n_neighbours, n);
  // Max-heap on (distance, index): the top is the current worst neighbour.
  std::vector<std::pair<double, std::size_t>> heap;
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::pair<double, std::size_t> cand{distance(query, row_span(train_, static_cast<Eigen::Index>(i))), i};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end());
    } else if (cand < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end());
    }
  }
  std::sort_heap(heap.begin(), heap.end());
  std::vector<std::size_t> out;
  out.reserve(heap.size());
  for (const auto& [d, i] : heap) out.push_back(i);
  return out;
}

double KnnModel::predict_one(std::span<const double> query) const {
  const auto idx = neighbours(query);
  if (config_.weights == KnnWeights::Uniform) {
    double sum = 0.0;
    for (auto i : idx) sum += target_[static_cast<Eigen::Index>(i)];
    return sum / static_cast<double>(idx.size());
  }
  // Inverse-distance weights; exact matches take all the weight.
  double exact_sum = 0.0;
  std::size_t exact = 0;
  double wsum = 0.0;
  double acc = 0.0;
  for (auto i : idx) {
    const double d = distance(query, row_span(train_, static_cast<Eigen::Index>(i)));
    const double y = target_[static_cast<Eigen::Index>(i)];
    if (d == 0.0) {
      exact_sum += y;
      ++exact;
    } else {
      wsum += 1.0 / d;
      acc += y / d;
    }
  }
  if (exact > 0) return exact_sum / static_cast<double>(exact);
  return acc / wsum;
}

Vector KnnModel::predict(const Matrix& features, std::size_t threads) const {
  Vector out(features.rows());
  parallel_for(
      static_cast<std::size_t>(features.rows()),
      [&](std::size_t r) { out[static_cast<Eigen::Index>(r)] = predict_one(row_span(features, static_cast<Eigen::Index>(r))); },
      threads);
  return out;
}

void KnnModel::to_json(nlohmann::json& j) const {
  j = {{"rows", train_.rows()},
       {"cols", train_.cols()},
       {"train", codec::pack_doubles(train_.data(), static_cast<std::size_t>(train_.size()))},
       {"target", codec::pack_doubles(target_.data(), static_cast<std::size_t>(target_.size()))}};
}

KnnModel KnnModel::from_json(const KnnConfig& config, const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto train = codec::unpack_doubles(j.at("train").get<std::string>());
  const auto target = codec::unpack_doubles(j.at("target").get<std::string>());
  if (train.size() != static_cast<std::size_t>(rows * cols) || target.size() != static_cast<std::size_t>(rows)) {
    throw Error(Errc::ParseError, "knn: stored training data has the wrong size");
  }
  KnnModel m;
  m.config_ = config;
  m.train_ = Eigen::Map<const Matrix>(train.data(), rows, cols);
  m.target_ = Eigen::Map<const Vector>(target.data(), rows);
  return m;
}

}  // namespace solarcast::models
