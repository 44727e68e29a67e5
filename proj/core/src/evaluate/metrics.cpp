#include "solarcast/evaluate/metrics.hpp"

#include "solarcast/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace solarcast::evaluate {

namespace {

double sample_std(const Vector& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

MetricsReport metrics(const Vector& actual, const Vector& predicted) {
  if (actual.size() != predicted.size()) {
    throw Error(Errc::ColumnMismatch, "metrics: " + std::to_string(actual.size()) + " actuals vs " +
                                          std::to_string(predicted.size()) + " predictions");
  }
  if (actual.size() == 0) throw Error(Errc::TooFewValues, "metrics need at least one value");
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i])) {
      throw Error(Errc::NonFiniteInput, "metrics: non-finite value", static_cast<std::size_t>(i) + 1);
    }
  }

  MetricsReport m;
  const auto n = static_cast<double>(actual.size());
  m.n_test = static_cast<std::size_t>(actual.size());
  const Vector err = actual - predicted;
  m.mae = err.cwiseAbs().sum() / n;
  m.rmse = std::sqrt(err.squaredNorm() / n);

  double ape = 0.0;
  std::size_t nonzero = 0;
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      ++m.n_zero_excluded;
      continue;
    }
    ape += std::abs(err[i] / actual[i]);
    ++nonzero;
  }
  if (nonzero > 0) m.mape = 100.0 * ape / static_cast<double>(nonzero);

  const double ss_tot = (actual.array() - actual.mean()).square().sum();
  if (ss_tot > 0.0) m.r2 = 1.0 - err.squaredNorm() / ss_tot;

  m.std_predicted = sample_std(predicted);
  m.std_test = sample_std(actual);
  return m;
}

void to_json(nlohmann::json& j, const MetricsReport& m) {
  j = {{"mape", optional_number(m.mape)},
       {"mae", m.mae},
       {"rmse", m.rmse},
       {"r2", optional_number(m.r2)},
       {"std_predicted", m.std_predicted},
       {"std_test", m.std_test},
       {"n_test", m.n_test},
       {"n_zero_excluded", m.n_zero_excluded}};
}

void from_json(const nlohmann::json& j, MetricsReport& m) {
  m.mape = j.at("mape").is_null() ? std::nullopt : std::optional<double>(j.at("mape").get<double>());
  m.mae = j.at("mae").get<double>();
  m.rmse = j.at("rmse").get<double>();
  m.r2 = j.at("r2").is_null() ? std::nullopt : std::optional<double>(j.at("r2").get<double>());
  m.std_predicted = j.at("std_predicted").get<double>();
  m.std_test = j.at("std_test").get<double>();
  m.n_test = j.at("n_test").get<std::size_t>();
  m.n_zero_excluded = j.at("n_zero_excluded").get<std::size_t>();
}

}  // namespace solarcast::evaluate
