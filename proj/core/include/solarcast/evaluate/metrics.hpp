#pragma once

#include "solarcast/matrix.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <optional>

namespace solarcast::evaluate {

struct MetricsReport {
  std::optional<double> mape;  // percent over non-zero actuals; absent when all actuals are 0
  double mae = 0.0;
  double rmse = 0.0;
  std::optional<double> r2;  // absent when the actuals have zero variance
  double std_predicted = 0.0;
  double std_test = 0.0;
  std::size_t n_test = 0;
  std::size_t n_zero_excluded = 0;  // actuals left out of MAPE
};

/// Error metrics in the units of the inputs (kWh). Standard deviations use
/// the n - 1 denominator. Throws ColumnMismatch, TooFewValues (empty) and
/// NonFiniteInput.
MetricsReport metrics(const Vector& actual, const Vector& predicted);

void to_json(nlohmann::json& j, const MetricsReport& report);
void from_json(const nlohmann::json& j, MetricsReport& report);

}  // namespace solarcast::evaluate
