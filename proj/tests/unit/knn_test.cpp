#include "solarcast/models/knn.hpp"
#include "solarcast/rng.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace solarcast;
using namespace solarcast::models;

namespace {

Matrix column(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-2, 2);
  }
  return m;
}

}  // namespace

TEST(Knn, HandExample) {
  const auto x = column({0, 1, 2, 10});
  Vector y(4);
  y << 0, 1, 2, 100;
  const auto model = KnnModel::fit({3, 1.0, KnnWeights::Uniform}, x, y);
  const std::vector<double> q = {0.6};
  // Manhattan distances 0.6, 0.4, 1.4, 9.4.
  EXPECT_EQ(model.neighbours(q), (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_DOUBLE_EQ(model.predict_one(q), 1.0);
}

TEST(Knn, SingleNeighbourReproducesTraining) {
  Rng rng(4);
  const auto x = random_matrix(80, 3, rng);
  Vector y(80);
  for (Eigen::Index i = 0; i < 80; ++i) y[i] = rng.uniform();
  const auto model = KnnModel::fit({1, 2.0, KnnWeights::Uniform}, x, y);
  EXPECT_EQ(model.predict(x), y);
}

TEST(Knn, AllNeighboursGiveGlobalMean) {
  Rng rng(5);
  const auto x = random_matrix(30, 2, rng);
  Vector y(30);
  for (Eigen::Index i = 0; i < 30; ++i) y[i] = rng.uniform(0, 10);
  const auto model = KnnModel::fit({30, 1.0, KnnWeights::Uniform}, x, y);
  const auto p = model.predict(random_matrix(10, 2, rng));
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], y.mean(), 1e-12);
}

TEST(Knn, TiesKeepLowerIndex) {
  const auto x = column({1, -1, 1, 3});
  Vector y(4);
  y << 10, 20, 30, 40;
  const auto model = KnnModel::fit({2, 1.0, KnnWeights::Uniform}, x, y);
  const std::vector<double> q = {0.0};
  EXPECT_EQ(model.neighbours(q), (std::vector<std::size_t>{0, 1}));
}

TEST(Knn, DistanceWeightingExactMatch) {
  const auto x = column({0, 1, 2});
  Vector y(3);
  y << 5, 7, 9;
  const auto model = KnnModel::fit({3, 1.0, KnnWeights::Distance}, x, y);
  const std::vector<double> hit = {1.0};
  EXPECT_DOUBLE_EQ(model.predict_one(hit), 7.0);
  const std::vector<double> q = {0.5};
  // Weights 1/0.5, 1/0.5, 1/1.5.
  EXPECT_NEAR(model.predict_one(q), (2 * 5 + 2 * 7 + 9 / 1.5) / (4 + 1 / 1.5), 1e-12);
}

// Oracle: full sort of (distance, index) pairs.
TEST(Knn, MatchesBruteForce) {
  Rng rng(6);
  for (double p : {1.0, 2.0, 3.0}) {
    const auto x = random_matrix(120, 4, rng);
    Vector y(120);
    for (Eigen::Index i = 0; i < 120; ++i) y[i] = rng.uniform();
    const auto model = KnnModel::fit({5, p, KnnWeights::Uniform}, x, y);
    const auto queries = random_matrix(50, 4, rng);
    const auto pred = model.predict(queries, 2);
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
      std::vector<std::pair<double, std::size_t>> d;
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double s = 0.0;
        for (Eigen::Index c = 0; c < 4; ++c) s += std::pow(std::abs(x(r, c) - queries(q, c)), p);
        d.emplace_back(std::pow(s, 1.0 / p), static_cast<std::size_t>(r));
      }
      std::sort(d.begin(), d.end());
      double mean = 0.0;
      std::vector<std::size_t> idx;
      for (int k = 0; k < 5; ++k) {
        mean += y[static_cast<Eigen::Index>(d[static_cast<std::size_t>(k)].second)] / 5.0;
        idx.push_back(d[static_cast<std::size_t>(k)].second);
      }
      EXPECT_EQ(model.neighbours(row_span(queries, q)), idx);
      EXPECT_NEAR(pred[q], mean, 1e-12);
    }
  }
}

TEST(Knn, JsonRoundTrip) {
  Rng rng(7);
  const auto x = random_matrix(25, 3, rng);
  Vector y = Vector::LinSpaced(25, 0, 1);
  const KnnConfig cfg{3, 1.0, KnnWeights::Uniform};
  const auto model = KnnModel::fit(cfg, x, y);
  nlohmann::json j;
  model.to_json(j);
  const auto back = KnnModel::from_json(cfg, nlohmann::json::parse(j.dump()));
  const auto q = random_matrix(10, 3, rng);
  EXPECT_EQ(model.predict(q), back.predict(q));
}
