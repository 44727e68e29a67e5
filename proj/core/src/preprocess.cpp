#include "solarcast/preprocess.hpp"

#include "solarcast/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace solarcast::preprocess {

namespace {

constexpr double kNegativeClamp = 1e-9;

}  // namespace

OutlierBounds OutlierBounds::from(const Quartiles& q) {
  return {q.q1 - 1.5 * q.iqr, q.q3 + 1.5 * q.iqr};
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw Error(Errc::TooFewValues, "quantile of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto k = static_cast<std::size_t>(std::floor(pos));
  const double gamma = pos - static_cast<double>(k);
  if (k + 1 >= sorted.size()) return sorted.back();
  return sorted[k] + gamma * (sorted[k + 1] - sorted[k]);
}

Quartiles quartiles(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(Errc::TooFewValues, "quartiles need at least 2 values, got " + std::to_string(values.size()));
  }
  Quartiles q;
  q.q1 = quantile(values, 0.25);
  q.q3 = quantile(values, 0.75);
  q.iqr = q.q3 - q.q1;
  return q;
}

std::vector<bool> detect_outliers(std::span<const double> values, const OutlierBounds& bounds) {
  std::vector<bool> mask(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    mask[i] = values[i] < bounds.lower || values[i] > bounds.upper;
  }
  return mask;
}

SkewnessStats skewness(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) throw Error(Errc::TooFewValues, "skewness needs at least 3 values");
  SkewnessStats s;
  s.n = n;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(n);
  double m2 = 0.0;
  for (double v : values) m2 += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(m2 / static_cast<double>(n - 1));
  if (!(s.std > 0.0)) throw Error(Errc::ZeroVariance, "skewness of a constant sample");
  double cubes = 0.0;
  for (double v : values) {
    const double z = (v - s.mean) / s.std;
    cubes += z * z * z;
  }
  const double nd = static_cast<double>(n);
  s.skewness = nd / ((nd - 1.0) * (nd - 2.0)) * cubes;
  return s;
}

Vector sqrt_transform(const Vector& target) {
  Vector out(target.size());
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    double v = target[i];
    if (v < 0.0) {
      if (v < -kNegativeClamp) {
        throw Error(Errc::NegativeTarget, "target value " + std::to_string(v) + " at index " + std::to_string(i));
      }
      v = 0.0;
    }
    out[i] = std::sqrt(v);
  }
  return out;
}

Vector inverse_transform(const Vector& transformed) {
  for (Eigen::Index i = 0; i < transformed.size(); ++i) {
    if (transformed[i] < 0.0) {
      throw Error(Errc::NegativeTarget, "inverse transform of a negative value at index " + std::to_string(i));
    }
  }
  return transformed.array().square();
}

std::vector<double> exclude_zeros(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (v != 0.0) out.push_back(v);
  }
  return out;
}

StandardizationParams zscore_fit(const Matrix& train, std::vector<std::string> columns) {
  if (train.rows() == 0 || train.cols() == 0) throw Error(Errc::EmptyMatrix, "cannot standardize an empty matrix");
  StandardizationParams p;
  p.columns = std::move(columns);
  const auto n = static_cast<double>(train.rows());
  for (Eigen::Index c = 0; c < train.cols(); ++c) {
    const double mean = train.col(c).sum() / n;
    double ss = 0.0;
    for (Eigen::Index r = 0; r < train.rows(); ++r) ss += (train(r, c) - mean) * (train(r, c) - mean);
    const double sd = train.rows() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    p.mean.push_back(mean);
    p.std.push_back(sd > 0.0 ? sd : 0.0);
  }
  return p;
}

Matrix zscore_apply(const StandardizationParams& params, const Matrix& features) {
  if (static_cast<std::size_t>(features.cols()) != params.mean.size()) {
    throw Error(Errc::ColumnMismatch, "standardization fitted on " + std::to_string(params.mean.size()) +
                                          " columns, got " + std::to_string(features.cols()));
  }
  Matrix out(features.rows(), features.cols());
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const auto k = static_cast<std::size_t>(c);
    if (params.std[k] == 0.0) {
      out.col(c).setZero();
    } else {
      out.col(c) = (features.col(c).array() - params.mean[k]) / params.std[k];
    }
  }
  return out;
}

FittedPreprocessing fit_preprocessing(const Matrix& features, const Vector& target,
                                      const std::vector<std::string>& columns,
                                      PreprocessOptions options) {
  if (features.rows() != target.size()) {
    throw Error(Errc::ColumnMismatch, "feature rows and target length differ");
  }
  FittedPreprocessing out;
  out.state.sqrt_target = options.sqrt_target;

  const std::span<const double> y(target.data(), static_cast<std::size_t>(target.size()));
  const auto nonzero = exclude_zeros(y);
  if (nonzero.size() >= 2) {
    out.state.outlier_bounds = OutlierBounds::from(quartiles(nonzero));
  } else {
    // Nothing to fence; keep every row.
    out.state.outlier_bounds = {-std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity()};
  }

  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool outlier = options.drop_outliers && y[i] != 0.0 &&
                         (y[i] < out.state.outlier_bounds.lower || y[i] > out.state.outlier_bounds.upper);
    if (outlier) {
      ++out.state.outliers_dropped;
    } else {
      out.kept_rows.push_back(i);
    }
  }

  out.state.standardization = zscore_fit(take_rows(features, out.kept_rows), columns);
  return out;
}

Vector forward_target(const TransformState& state, const Vector& target_kwh) {
  return state.sqrt_target ? sqrt_transform(target_kwh) : target_kwh;
}

Vector inverse_target(const TransformState& state, const Vector& model_output) {
  if (!state.sqrt_target) return model_output;
  return inverse_transform(model_output.cwiseMax(0.0));
}

void to_json(nlohmann::json& j, const TransformState& state) {
  nlohmann::json columns = nlohmann::json::object();
  nlohmann::json order = nlohmann::json::array();
  const auto& s = state.standardization;
  for (std::size_t c = 0; c < s.mean.size(); ++c) {
    const auto name = c < s.columns.size() ? s.columns[c] : std::to_string(c);
    columns[name] = {{"mean", s.mean[c]}, {"std", s.std[c]}};
    order.push_back(name);
  }
  j = {
      {"target_transform", state.sqrt_target ? "sqrt" : "identity"},
      {"column_order", order},
      {"standardization", columns},
      {"outlier_bounds", {{"lower", state.outlier_bounds.lower}, {"upper", state.outlier_bounds.upper}}},
      {"outliers_dropped", state.outliers_dropped},
  };
}

namespace {

double bound_from_json(const nlohmann::json& v, double fallback) {
  return v.is_number() ? v.get<double>() : fallback;
}

}  // namespace

void from_json(const nlohmann::json& j, TransformState& state) {
  state.sqrt_target = j.at("target_transform").get<std::string>() == "sqrt";
  state.standardization = {};
  for (const auto& name : j.at("column_order")) {
    const auto key = name.get<std::string>();
    const auto& entry = j.at("standardization").at(key);
    state.standardization.columns.push_back(key);
    state.standardization.mean.push_back(entry.at("mean").get<double>());
    state.standardization.std.push_back(entry.at("std").get<double>());
  }
  const auto& b = j.at("outlier_bounds");
  // Infinite fences serialize as null.
  state.outlier_bounds.lower = bound_from_json(b.at("lower"), -std::numeric_limits<double>::infinity());
  state.outlier_bounds.upper = bound_from_json(b.at("upper"), std::numeric_limits<double>::infinity());
  state.outliers_dropped = j.value("outliers_dropped", std::size_t{0});
}

}  // namespace solarcast::preprocess
