#include "oracles.hpp"
#include "solarcast/models/gbt.hpp"
#include "solarcast/rng.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace solarcast;
using namespace solarcast::models;

namespace {

GbtConfig stump_config() {
  GbtConfig c;
  c.n_estimators = 1;
  c.max_depth = 1;
  c.learning_rate = 1.0;
  c.gamma = 0.0;
  c.subsample = 1.0;
  c.lambda = 0.0;
  return c;
}

void noisy_sine(std::size_t n, std::uint64_t seed, Matrix& x, Vector& y) {
  Rng rng(seed);
  x.resize(static_cast<Eigen::Index>(n), 3);
  y.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < 3; ++c) x(i, c) = rng.uniform(-2, 2);
    y[i] = std::sin(x(i, 0)) + 0.5 * x(i, 1) * x(i, 1) + 0.1 * rng.uniform(-1, 1);
  }
}

}  // namespace

TEST(GbtGain, PlugInExample) {
  EXPECT_NEAR(gbt_split_gain(-5, 5, 5, 5, 1, 0), 25.0 / 6.0, 1e-12);
}

TEST(GbtGain, IdenticalChildrenCostGamma) {
  for (double gamma : {0.0, 0.1, 2.0}) {
    const double g = gbt_split_gain(3, 2, 3, 2, 0, gamma);
    EXPECT_NEAR(g, -gamma, 1e-12);
    EXPECT_LE(g, 0.0);
  }
}

TEST(GbtGain, LargeGammaRejects) {
  const double raw = gbt_split_gain(-5, 5, 5, 5, 1, 0);
  EXPECT_LT(gbt_split_gain(-5, 5, 5, 5, 1, raw + 1e-6), 0.0);
  EXPECT_NEAR(gbt_leaf_weight(-10, 4, 1), 2.0, 1e-15);
}

TEST(Gbt, BalancedStump) {
  Matrix x(4, 1);
  x << 0, 0, 1, 1;
  Vector y(4);
  y << 0, 0, 10, 10;
  const auto model = GbtModel::fit(stump_config(), x, y, 1);
  ASSERT_EQ(model.trees().size(), 1u);
  const auto& nodes = model.trees()[0].nodes();
  ASSERT_EQ(nodes.size(), 3u);
  EXPECT_EQ(nodes[0].feature, 0);
  EXPECT_DOUBLE_EQ(nodes[0].threshold, 0.5);
  const auto p = model.predict(x);
  EXPECT_NEAR(p[0], 0.0, 1e-12);
  EXPECT_NEAR(p[3], 10.0, 1e-12);
}

// Every small dataset on a fixed grid: the fitted stump's gain equals the
// exhaustive optimum and its leaves match the oracle's leaves for that split.
TEST(Gbt, StumpMatchesExhaustiveSearchOnSmallGrids) {
  const std::vector<double> levels = {0.0, 1.0, 3.0};
  std::size_t checked = 0;
  for (int n = 2; n <= 6; ++n) {
    Matrix x(n, 2);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = i % 4;
      x(i, 1) = (i * 3) % 5;
    }
    int combos = 1;
    for (int i = 0; i < n; ++i) combos *= 3;
    for (int code = 0; code < combos; ++code) {
      Vector y(n);
      for (int i = 0, c = code; i < n; ++i, c /= 3) y[i] = levels[static_cast<std::size_t>(c % 3)];
      auto cfg = stump_config();
      cfg.lambda = 1.0;
      cfg.learning_rate = 0.5;
      const auto model = GbtModel::fit(cfg, x, y, 0);
      const auto expected = oracle::best_stump(x, y, cfg.lambda, cfg.gamma, cfg.learning_rate, cfg.min_child_weight);
      const auto& nodes = model.trees()[0].nodes();
      ASSERT_EQ(nodes.size() == 3, expected.split) << "n=" << n << " code=" << code;
      if (expected.split) {
        const auto got = oracle::evaluate_stump(x, y, nodes[0].feature, nodes[0].threshold, cfg.lambda, cfg.gamma,
                                                cfg.learning_rate);
        ASSERT_NEAR(got.gain, expected.gain, 1e-12);
        ASSERT_NEAR(nodes[1].value, got.left_value, 1e-12);
        ASSERT_NEAR(nodes[2].value, got.right_value, 1e-12);
      } else {
        ASSERT_NEAR(nodes[0].value, expected.root_value, 1e-12);
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Gbt, TrainingLossNeverIncreases) {
  Matrix x;
  Vector y;
  noisy_sine(300, 3, x, y);
  GbtConfig cfg;
  cfg.n_estimators = 60;
  cfg.subsample = 1.0;
  cfg.learning_rate = 0.3;
  cfg.max_depth = 3;
  const auto model = GbtModel::fit(cfg, x, y, 5);
  const auto& loss = model.loss_curve();
  ASSERT_EQ(loss.size(), 60u);
  for (std::size_t i = 1; i < loss.size(); ++i) EXPECT_LE(loss[i], loss[i - 1] + 1e-12);
  EXPECT_LT(loss.back(), 0.1 * loss.front());
}

TEST(Gbt, LargeGammaGivesConstantModel) {
  Matrix x;
  Vector y;
  noisy_sine(100, 4, x, y);
  GbtConfig cfg;
  cfg.n_estimators = 5;
  cfg.gamma = 1e9;
  const auto model = GbtModel::fit(cfg, x, y, 1);
  for (const auto& t : model.trees()) EXPECT_EQ(t.nodes().size(), 1u);
  const auto p = model.predict(x);
  EXPECT_NEAR(p.maxCoeff() - p.minCoeff(), 0.0, 1e-12);
}

TEST(Gbt, SubsamplingIsSeeded) {
  Matrix x;
  Vector y;
  noisy_sine(200, 5, x, y);
  GbtConfig cfg;
  cfg.n_estimators = 20;
  cfg.subsample = 0.6;
  const auto a = GbtModel::fit(cfg, x, y, 11);
  const auto b = GbtModel::fit(cfg, x, y, 11);
  const auto c = GbtModel::fit(cfg, x, y, 12);
  EXPECT_EQ(a.predict(x), b.predict(x));
  EXPECT_NE(a.predict(x), c.predict(x));
}

TEST(Gbt, JsonRoundTrip) {
  Matrix x;
  Vector y;
  noisy_sine(120, 6, x, y);
  GbtConfig cfg;
  cfg.n_estimators = 10;
  const auto model = GbtModel::fit(cfg, x, y, 2);
  nlohmann::json j;
  model.to_json(j);
  const auto back = GbtModel::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.base_score(), model.base_score());
  EXPECT_EQ(model.predict(x), back.predict(x));
}
