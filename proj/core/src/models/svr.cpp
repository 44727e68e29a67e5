#include "solarcast/models/svr.hpp"

#include "codec.hpp"
#include "solarcast/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

namespace solarcast::models {

void PrecomputedKernel::row(std::size_t i, std::span<double> out) const {
  const auto r = row_span(k_, static_cast<Eigen::Index>(i));
  std::copy(r.begin(), r.end(), out.begin());
}

double PrecomputedKernel::diagonal(std::size_t i) const {
  const auto k = static_cast<Eigen::Index>(i);
  return k_(k, k);
}

double rbf(std::span<const double> a, std::span<const double> b, double gamma) noexcept {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

void RbfKernel::row(std::size_t i, std::span<double> out) const {
  const auto xi = row_span(points_, static_cast<Eigen::Index>(i));
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = rbf(xi, row_span(points_, static_cast<Eigen::Index>(j)), gamma_);
  }
}

std::size_t SvrSolution::support_vector_count() const {
  return static_cast<std::size_t>(std::count_if(dual.begin(), dual.end(), [](double d) { return d != 0.0; }));
}

namespace {

constexpr double kTau = 1e-12;

// Least-recently-used cache of kernel rows.
class RowCache {
 public:
  RowCache(const KernelSource& kernel, std::size_t budget_mb) : kernel_(kernel), n_(kernel.size()) {
    const std::size_t row_bytes = std::max<std::size_t>(1, n_ * sizeof(double));
    capacity_ = std::max<std::size_t>(2, budget_mb * 1024 * 1024 / row_bytes);
  }

  const std::vector<double>& get(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    std::vector<double> data;
    if (lru_.size() >= capacity_) {
      data = std::move(lru_.back().second);
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    data.resize(n_);
    kernel_.row(i, data);
    lru_.emplace_front(i, std::move(data));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  const KernelSource& kernel_;
  std::size_t n_;
  std::size_t capacity_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, decltype(lru_)::iterator> index_;
};

}  // namespace

SvrSolution svr_solve(const SvrConfig& config, const KernelSource& kernel, std::span<const double> target) {
  validate(config);
  const std::size_t n = kernel.size();
  if (target.size() != n) throw Error(Errc::ColumnMismatch, "svr: kernel size and target length differ");
  if (n == 0) throw Error(Errc::TooFewRows, "svr: no training rows");

  // Variables t < n are the upper-side multipliers (sign +1), t >= n the
  // lower-side ones (sign -1); both refer to sample t mod n.
  const std::size_t m = 2 * n;
  const double c = config.c;
  std::vector<double> alpha(m, 0.0);
  std::vector<double> grad(m);
  std::vector<double> diag(n);
  std::vector<int> sign(m);
  for (std::size_t t = 0; t < n; ++t) {
    grad[t] = config.epsilon - target[t];
    grad[t + n] = config.epsilon + target[t];
    sign[t] = 1;
    sign[t + n] = -1;
    diag[t] = kernel.diagonal(t);
  }

  RowCache cache(kernel, config.cache_mb);
  const std::size_t max_iter = std::max<std::size_t>(config.max_passes * n, 1);
  SvrSolution sol;
  std::size_t iter = 0;
  bool converged = false;

  auto upper = [&](std::size_t t) { return alpha[t] >= c; };
  auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  while (iter < max_iter) {
    // Maximal violating index i, then the second-order choice of j.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = m;
    for (std::size_t t = 0; t < m; ++t) {
      if (sign[t] == 1 ? !upper(t) : !lower(t)) {
        const double v = -sign[t] * grad[t];
        if (v >= gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    if (i == m) {
      converged = true;
      break;
    }
    const auto& ki = cache.get(i % n);
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = m;
    for (std::size_t t = 0; t < m; ++t) {
      if (sign[t] == 1 ? lower(t) : upper(t)) continue;
      const double yg = sign[t] * grad[t];
      gmax2 = std::max(gmax2, yg);
      const double b = gmax + yg;
      if (b > 0.0) {
        double a = diag[i % n] + diag[t % n] - 2.0 * ki[t % n];
        if (a <= 0.0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj <= best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (gmax + gmax2 < config.tol || j == m) {
      converged = true;
      break;
    }
    ++iter;

    const double kij = ki[j % n];
    const double qij = sign[i] * sign[j] * kij;
    const double ai_old = alpha[i];
    const double aj_old = alpha[j];
    if (sign[i] != sign[j]) {
      double quad = diag[i % n] + diag[j % n] + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = diag[i % n] + diag[j % n] - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - ai_old;
    const double dj = alpha[j] - aj_old;
    // Fetching row j may evict row i, so copy what is still needed.
    const std::vector<double> row_i = ki;
    const auto& kj = cache.get(j % n);
    for (std::size_t t = 0; t < m; ++t) {
      const double s = sign[t];
      grad[t] += s * (sign[i] * row_i[t % n] * di + sign[j] * kj[t % n] * dj);
    }
  }

  // Bias from the free variables, else the midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < m; ++t) {
    const double yg = sign[t] * grad[t];
    if (upper(t)) {
      if (sign[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (sign[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;

  sol.alpha.assign(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(n));
  sol.alpha_star.assign(alpha.begin() + static_cast<std::ptrdiff_t>(n), alpha.end());
  sol.dual.resize(n);
  for (std::size_t t = 0; t < n; ++t) sol.dual[t] = sol.alpha[t] - sol.alpha_star[t];
  sol.bias = -rho;
  sol.iterations = iter;
  sol.converged = converged;
  if (!converged) {
    sol.warnings.push_back("svr: stopped at the iteration cap (" + std::to_string(max_iter) +
                           ") before the KKT violation fell below tol");
  }
  return sol;
}

SvrModel SvrModel::fit(const SvrConfig& config, const Matrix& features, const Vector& target,
                       std::vector<std::string>* warnings) {
  if (features.rows() != target.size()) throw Error(Errc::ColumnMismatch, "svr: feature rows and target length differ");
  if (features.rows() < 2) throw Error(Errc::TooFewRows, "svr: need at least 2 rows");
  const RbfKernel kernel(features, config.gamma);
  const auto sol = svr_solve(config, kernel, std::span<const double>(target.data(), static_cast<std::size_t>(target.size())));
  if (warnings) warnings->insert(warnings->end(), sol.warnings.begin(), sol.warnings.end());

  std::vector<std::size_t> support;
  for (std::size_t t = 0; t < sol.dual.size(); ++t) {
    if (sol.dual[t] != 0.0) support.push_back(t);
  }
  SvrModel model;
  model.gamma_ = config.gamma;
  model.bias_ = sol.bias;
  model.iterations_ = sol.iterations;
  model.support_ = take_rows(features, support);
  model.coef_.resize(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) model.coef_[static_cast<Eigen::Index>(k)] = sol.dual[support[k]];
  return model;
}

Vector SvrModel::predict(const Matrix& features) const {
  if (support_.rows() > 0 && features.cols() != support_.cols()) {
    throw Error(Errc::ColumnMismatch, "svr: expected " + std::to_string(support_.cols()) + " columns");
  }
  Vector out(features.rows());
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    const auto x = row_span(features, r);
    double s = bias_;
    for (Eigen::Index k = 0; k < support_.rows(); ++k) s += coef_[k] * rbf(row_span(support_, k), x, gamma_);
    out[r] = s;
  }
  return out;
}

void SvrModel::to_json(nlohmann::json& j) const {
  j = {{"gamma", gamma_},
       {"bias", bias_},
       {"n_support", support_.rows()},
       {"n_features", support_.cols()},
       {"support_vectors", codec::pack_doubles(support_.data(), static_cast<std::size_t>(support_.size()))},
       {"dual_coef", codec::pack_doubles(coef_.data(), static_cast<std::size_t>(coef_.size()))}};
}

SvrModel SvrModel::from_json(const nlohmann::json& j) {
  SvrModel m;
  m.gamma_ = j.at("gamma").get<double>();
  m.bias_ = j.at("bias").get<double>();
  const auto rows = j.at("n_support").get<Eigen::Index>();
  const auto cols = j.at("n_features").get<Eigen::Index>();
  const auto sv = codec::unpack_doubles(j.at("support_vectors").get<std::string>());
  const auto coef = codec::unpack_doubles(j.at("dual_coef").get<std::string>());
  if (sv.size() != static_cast<std::size_t>(rows * cols) || coef.size() != static_cast<std::size_t>(rows)) {
    throw Error(Errc::ParseError, "svr: stored support vectors have the wrong size");
  }
  m.support_ = Eigen::Map<const Matrix>(sv.data(), rows, cols);
  m.coef_ = Eigen::Map<const Vector>(coef.data(), rows);
  return m;
}

}  // namespace solarcast::models
