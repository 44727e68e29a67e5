#pragma once

// Brute-force reference implementations. Deliberately naive: plain loops,
// no shared code with the library beyond the data types.

#include "solarcast/matrix.hpp"
#include "solarcast/models/mlp.hpp"
#include "solarcast/models/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace solarcast::oracle {

struct Metrics {
  std::optional<double> mape;
  double mae = 0.0;
  double rmse = 0.0;
  std::optional<double> r2;
  double std_predicted = 0.0;
  double std_test = 0.0;
};

inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline Metrics metrics(const std::vector<double>& a, const std::vector<double>& p) {
  Metrics m;
  const auto n = static_cast<double>(a.size());
  double abs_sum = 0.0, sq_sum = 0.0, pct = 0.0, mean = 0.0;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    abs_sum += std::abs(a[i] - p[i]);
    sq_sum += (a[i] - p[i]) * (a[i] - p[i]);
    mean += a[i];
    if (a[i] != 0.0) {
      pct += std::abs(a[i] - p[i]) / std::abs(a[i]);
      ++nonzero;
    }
  }
  mean /= n;
  double tot = 0.0;
  for (double x : a) tot += (x - mean) * (x - mean);
  m.mae = abs_sum / n;
  m.rmse = std::sqrt(sq_sum / n);
  if (nonzero > 0) m.mape = 100.0 * pct / static_cast<double>(nonzero);
  if (tot > 0.0) m.r2 = 1.0 - sq_sum / tot;
  m.std_predicted = sample_std(p);
  m.std_test = sample_std(a);
  return m;
}

/// Best depth-1 split for squared error with base score mean(y), found by
/// trying every midpoint of every feature.
struct Stump {
  bool split = false;
  double gain = -std::numeric_limits<double>::infinity();
  double left_value = 0.0;   // learning-rate scaled leaf weight
  double right_value = 0.0;
  double root_value = 0.0;  // leaf weight when no split is accepted
};

inline double stump_gain(double gl, double hl, double gr, double hr, double lambda, double gamma) {
  const double g = gl + gr, h = hl + hr;
  return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda)) - gamma;
}

/// Gain and leaves of splitting column `f` at `threshold`.
inline Stump evaluate_stump(const Matrix& x, const Vector& y, Eigen::Index f, double threshold, double lambda,
                            double gamma, double lr) {
  const double base = y.mean();
  double gl = 0, hl = 0, gr = 0, hr = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double g = base - y[i];
    if (x(i, f) <= threshold) {
      gl += g;
      hl += 1;
    } else {
      gr += g;
      hr += 1;
    }
  }
  Stump s;
  s.gain = stump_gain(gl, hl, gr, hr, lambda, gamma);
  s.left_value = -gl / (hl + lambda) * lr;
  s.right_value = -gr / (hr + lambda) * lr;
  s.root_value = -(gl + gr) / (hl + hr + lambda) * lr;
  return s;
}

inline Stump best_stump(const Matrix& x, const Vector& y, double lambda, double gamma, double lr,
                        double min_child_weight) {
  Stump best;
  best.root_value = evaluate_stump(x, y, 0, std::numeric_limits<double>::infinity(), lambda, gamma, lr).root_value;
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    std::vector<double> values(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) values[static_cast<std::size_t>(i)] = x(i, f);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double t = values[k] + (values[k + 1] - values[k]) / 2.0;
      auto s = evaluate_stump(x, y, f, t, lambda, gamma, lr);
      std::size_t n_left = 0;
      for (Eigen::Index i = 0; i < x.rows(); ++i) n_left += x(i, f) <= t ? 1 : 0;
      const double hl = static_cast<double>(n_left), hr = static_cast<double>(x.rows()) - hl;
      if (hl < min_child_weight || hr < min_child_weight) continue;
      if (s.gain > 0.0 && s.gain > best.gain) {
        s.split = true;
        s.root_value = best.root_value;
        best = s;
      }
    }
  }
  return best;
}

/// Central differences of the regularized MLP loss with respect to every
/// flattened parameter.
inline std::vector<double> mlp_numeric_gradient(const models::MlpParams& params, const Eigen::MatrixXd& x,
                                                const Vector& y, double alpha, double h = 1e-5) {
  auto loss = [&](const models::MlpParams& p) {
    const Vector out = models::mlp_forward(p, x);
    double sq = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) sq += (out[i] - y[i]) * (out[i] - y[i]);
    double w2 = 0.0;
    for (const auto& w : p.weights) w2 += w.squaredNorm();
    const auto b = static_cast<double>(y.size());
    return sq / (2.0 * b) + alpha * w2 / (2.0 * b);
  };
  auto flat = params.flatten();
  std::vector<double> grad(flat.size());
  models::MlpParams probe = params;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const double keep = flat[k];
    flat[k] = keep + h;
    probe.assign(flat);
    const double up = loss(probe);
    flat[k] = keep - h;
    probe.assign(flat);
    const double down = loss(probe);
    flat[k] = keep;
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
  return std::sqrt(diff) / scale;
}

/// Largest violation of the epsilon-SVR optimality conditions, measured on
/// the residual r_i = y_i - f(x_i) with f = sum_j dual_j K_ij + bias:
///   alpha_i = alpha*_i = 0      ->  |r_i| <= eps
///   0 < alpha_i < C             ->  r_i = eps
///   alpha_i = C                 ->  r_i >= eps
/// and the mirrored conditions for alpha*. Also checks the box and the
/// equality constraint.
inline double svr_kkt_violation(const models::SvrSolution& s, const Matrix& kernel, const std::vector<double>& y,
                                double c, double eps) {
  const std::size_t n = y.size();
  const double bound_tol = 1e-12 * std::max(1.0, c);
  double worst = 0.0;
  double balance = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = s.bias;
    for (std::size_t j = 0; j < n; ++j) {
      f += (s.alpha[j] - s.alpha_star[j]) * kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const double r = y[i] - f;
    const double a = s.alpha[i], as = s.alpha_star[i];
    balance += a - as;
    worst = std::max({worst, -a, -as, a - c, as - c});
    if (a > bound_tol && as > bound_tol) worst = std::max(worst, std::min(a, as));
    if (a <= bound_tol && as <= bound_tol) worst = std::max(worst, std::abs(r) - eps);
    if (a > bound_tol && a < c - bound_tol) worst = std::max(worst, std::abs(r - eps));
    if (a >= c - bound_tol) worst = std::max(worst, eps - r);
    if (as > bound_tol && as < c - bound_tol) worst = std::max(worst, std::abs(r + eps));
    if (as >= c - bound_tol) worst = std::max(worst, eps + r);
  }
  return std::max(worst, std::abs(balance));
}

}  // namespace solarcast::oracle
