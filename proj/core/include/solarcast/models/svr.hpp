#pragma once

#include "solarcast/matrix.hpp"
#include "solarcast/models/config.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace solarcast::models {

/// Row access to a symmetric PSD kernel matrix.
class KernelSource {
 public:
  virtual ~KernelSource() = default;
  virtual std::size_t size() const = 0;
  virtual void row(std::size_t i, std::span<double> out) const = 0;
  virtual double diagonal(std::size_t i) const = 0;
};

class PrecomputedKernel final : public KernelSource {
 public:
  explicit PrecomputedKernel(Matrix k) : k_(std::move(k)) {}
  std::size_t size() const override { return static_cast<std::size_t>(k_.rows()); }
  void row(std::size_t i, std::span<double> out) const override;
  double diagonal(std::size_t i) const override;

 private:
  Matrix k_;
};

class RbfKernel final : public KernelSource {
 public:
  RbfKernel(const Matrix& points, double gamma) : points_(points), gamma_(gamma) {}
  std::size_t size() const override { return static_cast<std::size_t>(points_.rows()); }
  void row(std::size_t i, std::span<double> out) const override;
  double diagonal(std::size_t) const override { return 1.0; }

 private:
  const Matrix& points_;
  double gamma_;
};

double rbf(std::span<const double> a, std::span<const double> b, double gamma) noexcept;

struct SvrSolution {
  std::vector<double> alpha;       // multipliers of the upper tube side
  std::vector<double> alpha_star;  // multipliers of the lower tube side
  std::vector<double> dual;        // alpha - alpha_star, one per sample
  double bias = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
  std::vector<std::string> warnings;

  std::size_t support_vector_count() const;
};

/// Epsilon-SVR dual by sequential minimal optimization with second-order
/// working-set selection:
///   min 1/2 (a - a*)' K (a - a*) + eps sum(a + a*) - y'(a - a*)
///   s.t. sum(a - a*) = 0, 0 <= a, a* <= C.
/// Stops when the maximal KKT violation drops below config.tol. Hitting the
/// iteration cap returns the current iterate with converged = false and a
/// warning.
SvrSolution svr_solve(const SvrConfig& config, const KernelSource& kernel, std::span<const double> target);

class SvrModel {
 public:
  static SvrModel fit(const SvrConfig& config, const Matrix& features, const Vector& target,
                      std::vector<std::string>* warnings = nullptr);

  Vector predict(const Matrix& features) const;

  std::size_t support_vector_count() const noexcept { return static_cast<std::size_t>(coef_.size()); }
  double bias() const noexcept { return bias_; }
  std::size_t solver_iterations() const noexcept { return iterations_; }

  void to_json(nlohmann::json& j) const;
  static SvrModel from_json(const nlohmann::json& j);

 private:
  double gamma_ = 1.0;
  Matrix support_;
  Vector coef_;
  double bias_ = 0.0;
  std::size_t iterations_ = 0;
};

}  // namespace solarcast::models
