#include "oracles.hpp"
#include "solarcast/models/svr.hpp"
#include "solarcast/rng.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace solarcast;
using namespace solarcast::models;

namespace {

Matrix kernel_matrix(const Matrix& x, double gamma) {
  Matrix k(x.rows(), x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) k(i, j) = rbf(row_span(x, i), row_span(x, j), gamma);
  }
  return k;
}

double dual_objective(const Matrix& k, const std::vector<double>& beta, const std::vector<double>& y, double eps) {
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    for (std::size_t j = 0; j < beta.size(); ++j) {
      quad += beta[i] * beta[j] * k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    lin += eps * std::abs(beta[i]) - y[i] * beta[i];
  }
  return 0.5 * quad + lin;
}

}  // namespace

TEST(Svr, RbfKernel) {
  const std::vector<double> a = {0, 0}, b = {1, 2};
  EXPECT_NEAR(rbf(a, b, 0.5), std::exp(-2.5), 1e-15);
  EXPECT_EQ(rbf(a, a, 3.0), 1.0);
}

TEST(Svr, FlatTargetGivesZeroDuals) {
  Matrix x(2, 1);
  x << 0, 1;
  const std::vector<double> y = {0, 0};
  const auto sol = svr_solve(SvrConfig{}, PrecomputedKernel(kernel_matrix(x, 1.0)), y);
  EXPECT_EQ(sol.dual, (std::vector<double>{0, 0}));
  EXPECT_EQ(sol.bias, 0.0);
  EXPECT_EQ(sol.support_vector_count(), 0u);
  Vector yv(2);
  yv.setZero();
  const auto model = SvrModel::fit(SvrConfig{}, x, yv);
  EXPECT_EQ(model.predict(x).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Svr, WideTubeHasNoSupportVectors) {
  Rng rng(1);
  Matrix x(30, 2);
  Vector y(30);
  for (Eigen::Index i = 0; i < 30; ++i) {
    x(i, 0) = rng.uniform();
    x(i, 1) = rng.uniform();
    y[i] = rng.uniform(3, 4);
  }
  SvrConfig cfg;
  cfg.epsilon = (y.array() - y.mean()).abs().maxCoeff() + 0.01;
  const auto model = SvrModel::fit(cfg, x, y);
  EXPECT_EQ(model.support_vector_count(), 0u);
  const auto p = model.predict(x);
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], model.bias());
  EXPECT_LE((p.array() - y.array()).abs().maxCoeff(), cfg.epsilon);
}

TEST(Svr, LearnsIdentity) {
  const Eigen::Index n = 20;
  Matrix x(n, 1);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = -1.0 + 2.0 * static_cast<double>(i) / (n - 1);
    y[i] = x(i, 0);
  }
  SvrConfig cfg;
  cfg.epsilon = 0.01;
  cfg.c = 100;
  cfg.gamma = 1;
  const auto model = SvrModel::fit(cfg, x, y);
  Matrix xt(50, 1);
  for (Eigen::Index i = 0; i < 50; ++i) xt(i, 0) = -0.98 + 1.96 * static_cast<double>(i) / 49.0;
  const Vector err = model.predict(xt) - xt.col(0);
  EXPECT_LT(err.squaredNorm() / 50.0, 1e-2);
}

// Oracle for a three-point problem: grid search over beta = alpha - alpha*
// under the equality constraint, minimizing the dual objective.
TEST(Svr, ThreePointDualMatchesGridSearch) {
  Matrix x(3, 1);
  x << -1, 0, 1.5;
  const std::vector<double> y = {-1.0, 0.5, 1.0};
  const double c = 1.0, eps = 0.1, gamma = 0.7;
  const Matrix k = kernel_matrix(x, gamma);
  SvrConfig cfg;
  cfg.c = c;
  cfg.epsilon = eps;
  cfg.tol = 1e-8;
  const auto sol = svr_solve(cfg, PrecomputedKernel(k), y);

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_beta;
  const int steps = 400;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; b <= steps; ++b) {
      const double b0 = -c + 2.0 * c * a / steps;
      const double b1 = -c + 2.0 * c * b / steps;
      const double b2 = -b0 - b1;
      if (std::abs(b2) > c) continue;
      const std::vector<double> beta = {b0, b1, b2};
      const double obj = dual_objective(k, beta, y, eps);
      if (obj < best) {
        best = obj;
        best_beta = beta;
      }
    }
  }
  const double solved = dual_objective(k, sol.dual, y, eps);
  EXPECT_LE(solved, best + 1e-9);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(sol.dual[i], best_beta[i], 2.0 * 2.0 * c / steps);
}

TEST(Svr, KktHoldsOnRandomProblems) {
  Rng rng(2);
  for (int problem = 0; problem < 3; ++problem) {
    Matrix x(60, 3);
    std::vector<double> y(60);
    for (Eigen::Index i = 0; i < 60; ++i) {
      for (Eigen::Index c = 0; c < 3; ++c) x(i, c) = rng.uniform(-1, 1);
      y[static_cast<std::size_t>(i)] = std::sin(2 * x(i, 0)) + x(i, 1) * x(i, 2) + 0.1 * rng.uniform(-1, 1);
    }
    SvrConfig cfg;
    cfg.c = 2.0;
    cfg.epsilon = 0.05;
    cfg.gamma = 0.8;
    const Matrix k = kernel_matrix(x, cfg.gamma);
    const auto sol = svr_solve(cfg, RbfKernel(x, cfg.gamma), y);
    EXPECT_TRUE(sol.converged);
    EXPECT_LE(oracle::svr_kkt_violation(sol, k, y, cfg.c, cfg.epsilon), cfg.tol);
  }
}

TEST(Svr, DuplicatingZeroDualPointKeepsPredictions) {
  Rng rng(3);
  Matrix x(25, 1);
  Vector y(25);
  for (Eigen::Index i = 0; i < 25; ++i) {
    x(i, 0) = rng.uniform(-2, 2);
    y[i] = 0.3 * x(i, 0);
  }
  SvrConfig cfg;
  cfg.epsilon = 0.2;
  cfg.tol = 1e-9;
  const auto base = svr_solve(cfg, RbfKernel(x, cfg.gamma), to_std(y));
  Eigen::Index inside = -1;
  for (Eigen::Index i = 0; i < 25; ++i) {
    if (base.dual[static_cast<std::size_t>(i)] == 0.0) inside = i;
  }
  ASSERT_GE(inside, 0);
  Matrix x2(26, 1);
  x2 << x, x.row(inside);
  Vector y2(26);
  y2 << y, y[inside];
  const auto a = SvrModel::fit(cfg, x, y);
  const auto b = SvrModel::fit(cfg, x2, y2);
  Matrix q(40, 1);
  for (Eigen::Index i = 0; i < 40; ++i) q(i, 0) = -2.0 + 0.1 * static_cast<double>(i);
  EXPECT_LT((a.predict(q) - b.predict(q)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Svr, IterationCapWarnsInsteadOfThrowing) {
  Rng rng(4);
  Matrix x(40, 2);
  Vector y(40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    x(i, 0) = rng.uniform();
    x(i, 1) = rng.uniform();
    y[i] = rng.uniform(-1, 1);
  }
  SvrConfig cfg;
  cfg.c = 1000;
  cfg.epsilon = 0.0;
  cfg.max_passes = 1;
  cfg.tol = 1e-12;
  std::vector<std::string> warnings;
  const auto model = SvrModel::fit(cfg, x, y, &warnings);
  EXPECT_FALSE(warnings.empty());
  EXPECT_TRUE(model.predict(x).allFinite());
}

TEST(Svr, JsonRoundTrip) {
  Rng rng(5);
  Matrix x(30, 2);
  Vector y(30);
  for (Eigen::Index i = 0; i < 30; ++i) {
    x(i, 0) = rng.uniform();
    x(i, 1) = rng.uniform();
    y[i] = x(i, 0) - x(i, 1);
  }
  const auto model = SvrModel::fit(SvrConfig{}, x, y);
  nlohmann::json j;
  model.to_json(j);
  const auto back = SvrModel::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(model.predict(x), back.predict(x));
}
