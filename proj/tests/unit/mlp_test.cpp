#include "oracles.hpp"
#include "solarcast/error.hpp"
#include "solarcast/models/mlp.hpp"
#include "solarcast/rng.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace solarcast;
using namespace solarcast::models;

namespace {

Eigen::MatrixXd random_inputs(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-1, 1);
  }
  return m;
}

double gradient_norm(const MlpParams& g) {
  double s = 0.0;
  for (double v : g.flatten()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST(Mlp, InitializationShapesAndRange) {
  const auto p = MlpParams::initialize(4, {5, 3}, 1);
  ASSERT_EQ(p.layer_count(), 3u);
  EXPECT_EQ(p.weights[0].rows(), 4);
  EXPECT_EQ(p.weights[0].cols(), 5);
  EXPECT_EQ(p.weights[2].cols(), 1);
  EXPECT_EQ(p.parameter_count(), 4u * 5 + 5 + 5 * 3 + 3 + 3 * 1 + 1);
  const double bound = std::sqrt(6.0 / 9.0);
  EXPECT_LE(p.weights[0].cwiseAbs().maxCoeff(), bound);
  EXPECT_EQ(p.biases[0].squaredNorm(), 0.0);
}

TEST(Mlp, FlattenAssignRoundTrip) {
  auto p = MlpParams::initialize(3, {4}, 2);
  const auto flat = p.flatten();
  auto q = MlpParams::zeros_like(p);
  q.assign(flat);
  EXPECT_EQ(q.flatten(), flat);
}

TEST(Mlp, ZeroWeightsPredictZero) {
  const auto p = MlpParams::zeros_like(MlpParams::initialize(3, {8, 8}, 1));
  Rng rng(1);
  const auto out = mlp_forward(p, random_inputs(10, 3, rng));
  EXPECT_EQ(out.cwiseAbs().maxCoeff(), 0.0);
}

class MlpGradient : public ::testing::TestWithParam<int> {};

TEST_P(MlpGradient, MatchesCentralDifferences) {
  const int layers = GetParam();
  Rng rng(static_cast<std::uint64_t>(100 + layers));
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::size_t> hidden(static_cast<std::size_t>(layers - 1), 4);
    auto p = MlpParams::initialize(3, hidden, rng.next());
    // Non-zero biases so no unit sits exactly on the ReLU kink.
    auto flat = p.flatten();
    for (auto& v : flat) v += rng.uniform(-0.1, 0.1);
    p.assign(flat);
    const auto x = random_inputs(7, 3, rng);
    Vector y(7);
    for (Eigen::Index i = 0; i < 7; ++i) y[i] = rng.uniform(-1, 1);
    const auto analytic = mlp_loss_and_gradient(p, x, y, 0.3).gradient.flatten();
    const auto numeric = oracle::mlp_numeric_gradient(p, x, y, 0.3);
    EXPECT_LT(oracle::relative_error(analytic, numeric), 1e-4) << "layers=" << layers << " trial=" << trial;
  }
}

INSTANTIATE_TEST_SUITE_P(LayerCounts, MlpGradient, ::testing::Values(1, 2, 4));

TEST(Mlp, PerfectFitHasZeroGradient) {
  auto p = MlpParams::initialize(1, {}, 1);
  p.weights[0](0, 0) = 2.0;
  p.biases[0](0) = -1.0;
  Eigen::MatrixXd x(5, 1);
  x << -2, -1, 0, 1, 2;
  const Vector y = (2.0 * x.col(0)).array() - 1.0;
  const auto lg = mlp_loss_and_gradient(p, x, y, 0.0);
  EXPECT_LT(lg.loss, 1e-20);
  EXPECT_LT(gradient_norm(lg.gradient), 1e-8);
}

TEST(Mlp, LinearNetLearnsSlope) {
  Rng rng(3);
  const Eigen::Index n = 1000;
  Matrix x(n, 1);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = rng.uniform(-1, 1);
    y[i] = 2.0 * x(i, 0);
  }
  // Oracle: the least-squares slope through the origin is exactly 2.
  MlpConfig cfg;
  cfg.hidden_layer_sizes = {};
  cfg.max_iter = 100;
  cfg.learning_rate_init = 0.05;
  cfg.batch_size = 50;
  cfg.alpha = 0.0;
  const auto model = MlpModel::fit(cfg, x, y, 7);
  EXPECT_NEAR(model.params().weights[0](0, 0), 2.0, 0.05);
  EXPECT_LT(model.loss_curve().back(), model.loss_curve().front());
}

TEST(Mlp, BackpropStepLowersLossOnFixedBatch) {
  Rng rng(4);
  const auto x = random_inputs(32, 2, rng);
  Vector y = x.col(0).array().square() + x.col(1).array();
  MlpConfig cfg;
  cfg.learning_rate_init = 0.01;
  auto state = MlpTrainingState::start(MlpParams::initialize(2, {16}, 5), cfg);
  const double first = mlp_backprop_step(state, x, y);
  double last = first;
  for (int i = 0; i < 200; ++i) last = mlp_backprop_step(state, x, y);
  EXPECT_EQ(state.step, 201u);
  EXPECT_LT(last, 0.5 * first);
}

TEST(Mlp, DivergenceThrowsNonFiniteLoss) {
  auto p = MlpParams::initialize(1, {}, 1);
  p.weights[0](0, 0) = std::numeric_limits<double>::infinity();
  MlpConfig cfg;
  auto state = MlpTrainingState::start(p, cfg);
  Eigen::MatrixXd x(2, 1);
  x << 1, 2;
  Vector y(2);
  y << 1, 2;
  try {
    mlp_backprop_step(state, x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonFiniteLoss);
  }
}

TEST(Mlp, SeededFitIsReproducibleAndSerializable) {
  Rng rng(5);
  Matrix x(200, 3);
  for (Eigen::Index r = 0; r < 200; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) x(r, c) = rng.uniform(-1, 1);
  }
  const Vector y = x.col(0) - x.col(2);
  MlpConfig cfg;
  cfg.hidden_layer_sizes = {8};
  cfg.max_iter = 20;
  const auto a = MlpModel::fit(cfg, x, y, 3);
  const auto b = MlpModel::fit(cfg, x, y, 3);
  EXPECT_EQ(a.predict(x), b.predict(x));
  nlohmann::json j;
  a.to_json(j);
  const auto back = MlpModel::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(a.predict(x), back.predict(x));
}
