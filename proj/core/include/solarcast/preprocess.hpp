#pragma once

#include "solarcast/matrix.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace solarcast::preprocess {

struct Quartiles {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
};

/// Boxplot fences, q1 - 1.5 iqr and q3 + 1.5 iqr.
struct OutlierBounds {
  double lower = 0.0;
  double upper = 0.0;

  static OutlierBounds from(const Quartiles& q);
};

struct SkewnessStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) standard deviation
  double skewness = 0.0;
};

struct StandardizationParams {
  std::vector<std::string> columns;
  std::vector<double> mean;
  std::vector<double> std;  // 0 marks a constant column
};

struct TransformState {
  bool sqrt_target = true;
  StandardizationParams standardization;
  OutlierBounds outlier_bounds;
  std::size_t outliers_dropped = 0;
};

/// p-th quantile of `values` with linear interpolation between order
/// statistics: position (n - 1) p in the sorted sample.
double quantile(std::span<const double> values, double p);

/// Throws TooFewValues for fewer than two values.
Quartiles quartiles(std::span<const double> values);

/// mask[i] is true iff values[i] lies strictly outside the fences.
std::vector<bool> detect_outliers(std::span<const double> values, const OutlierBounds& bounds);

/// Adjusted Fisher-Pearson coefficient n / ((n-1)(n-2)) * sum(((x - mean) / s)^3)
/// with s the sample standard deviation. Throws TooFewValues (n < 3) and
/// ZeroVariance.
SkewnessStats skewness(std::span<const double> values);

/// Values with |v| < 1e-9 below zero are clamped to 0 first; anything more
/// negative throws NegativeTarget.
Vector sqrt_transform(const Vector& target);
Vector inverse_transform(const Vector& transformed);

/// Copies `values` without the exact zeros (night-time windows).
std::vector<double> exclude_zeros(std::span<const double> values);

/// Per-column mean and sample standard deviation. Throws EmptyMatrix.
StandardizationParams zscore_fit(const Matrix& train, std::vector<std::string> columns = {});
/// (x - mean) / std; constant columns map to 0.
Matrix zscore_apply(const StandardizationParams& params, const Matrix& features);

/// Result of fitting the full preprocessing chain on training rows.
struct FittedPreprocessing {
  TransformState state;
  std::vector<std::size_t> kept_rows;  // training rows that survive outlier removal
};

struct PreprocessOptions {
  bool sqrt_target = true;
  bool drop_outliers = true;
};

/// Fences come from the zero-excluded target; non-zero rows outside them
/// are dropped; standardization is fitted on the surviving rows.
FittedPreprocessing fit_preprocessing(const Matrix& features, const Vector& target,
                                      const std::vector<std::string>& columns,
                                      PreprocessOptions options = {});

Vector forward_target(const TransformState& state, const Vector& target_kwh);

/// Maps model outputs back to kWh. Outputs in square-root space are clamped
/// at 0 first since a negative root has no energy meaning.
Vector inverse_target(const TransformState& state, const Vector& model_output);

void to_json(nlohmann::json& j, const TransformState& state);
void from_json(const nlohmann::json& j, TransformState& state);

}  // namespace solarcast::preprocess
