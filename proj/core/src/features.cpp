#include "solarcast/features.hpp"

#include "solarcast/csv.hpp"
#include "solarcast/error.hpp"
#include "solarcast/models/trained_model.hpp"
#include "solarcast/parallel.hpp"
#include "solarcast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace solarcast::features {

std::string prior_column(std::size_t lag) { return "prior_" + std::to_string(lag); }

std::optional<std::size_t> FeatureMatrix::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i) {
    if (column_names[i] == name) return i;
  }
  return std::nullopt;
}

FeatureMatrix FeatureMatrix::take(std::span<const std::size_t> rows) const {
  FeatureMatrix out;
  out.frame = frame;
  out.column_names = column_names;
  out.features = take_rows(features, rows);
  out.target = take_rows(target, rows);
  out.timestamps.reserve(rows.size());
  for (auto r : rows) out.timestamps.push_back(timestamps.at(r));
  return out;
}

FeatureMatrix from_frame(const dataio::AlignedFrame& frame) {
  return {frame.frame, frame.timestamps, frame.column_names, frame.features, frame.target};
}

FeatureMatrix derive_calendar(const FeatureMatrix& matrix) {
  FeatureMatrix out = matrix;
  const auto n = static_cast<Eigen::Index>(matrix.rows());
  const auto c = matrix.features.cols();
  out.features.conservativeResize(n, c + 2);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto t = matrix.timestamps[static_cast<std::size_t>(r)];
    out.features(r, c) = static_cast<double>(month_of(t));
    out.features(r, c + 1) = static_cast<double>(hour_of(t));
  }
  out.column_names.emplace_back(kMonthColumn);
  out.column_names.emplace_back(kHourColumn);
  return out;
}

FeatureMatrix derive_priors(const FeatureMatrix& matrix, LagSpec spec) {
  const std::size_t k = spec.n_priors;
  if (k > kMaxPriors) {
    throw Error(Errc::InvalidArgument, "at most " + std::to_string(kMaxPriors) + " prior columns, got " + std::to_string(k));
  }
  if (k == 0) return matrix;
  if (matrix.rows() <= k) {
    throw Error(Errc::TooFewRows, std::to_string(matrix.rows()) + " rows cannot carry " + std::to_string(k) + " priors");
  }
  const auto n = static_cast<Eigen::Index>(matrix.rows() - k);
  const auto c = matrix.features.cols();
  const auto lag = static_cast<Eigen::Index>(k);
  FeatureMatrix out;
  out.frame = matrix.frame;
  out.timestamps.assign(matrix.timestamps.begin() + static_cast<std::ptrdiff_t>(k), matrix.timestamps.end());
  out.column_names = matrix.column_names;
  out.features.resize(n, c + lag);
  out.features.leftCols(c) = matrix.features.bottomRows(n);
  for (Eigen::Index j = 1; j <= lag; ++j) {
    out.features.col(c + j - 1) = matrix.target.segment(lag - j, n);
    out.column_names.push_back(prior_column(static_cast<std::size_t>(j)));
  }
  out.target = matrix.target.tail(n);
  return out;
}

std::string_view to_string(Preset preset) noexcept { return preset == Preset::Full ? "full" : "reduced"; }

std::optional<Preset> parse_preset(std::string_view text) noexcept {
  if (text == "full") return Preset::Full;
  if (text == "reduced") return Preset::Reduced;
  return std::nullopt;
}

FeatureMatrix select_columns(const FeatureMatrix& matrix, const std::vector<std::string>& names) {
  std::vector<Eigen::Index> idx;
  for (const auto& name : names) {
    const auto i = matrix.column_index(name);
    if (!i) throw Error(Errc::SchemaMismatch, "column '" + name + "' is not present");
    idx.push_back(static_cast<Eigen::Index>(*i));
  }
  FeatureMatrix out;
  out.frame = matrix.frame;
  out.timestamps = matrix.timestamps;
  out.column_names = names;
  out.target = matrix.target;
  out.features.resize(matrix.features.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.features.col(static_cast<Eigen::Index>(k)) = matrix.features.col(idx[k]);
  return out;
}

FeatureMatrix select_preset(const FeatureMatrix& matrix, Preset preset) {
  if (preset == Preset::Full) return matrix;
  std::vector<std::string> keep;
  for (auto field : {dataio::WeatherField::Ghi, dataio::WeatherField::Temperature, dataio::WeatherField::RelativeHumidity}) {
    keep.emplace_back(dataio::info(field).column);
  }
  keep.emplace_back(kMonthColumn);
  keep.emplace_back(kHourColumn);
  for (const auto& name : matrix.column_names) {
    if (name.starts_with("prior_")) keep.push_back(name);
  }
  return select_columns(matrix, keep);
}

FeatureMatrix build_features(const dataio::AlignedFrame& frame, Preset preset, std::size_t n_priors) {
  return select_preset(derive_priors(derive_calendar(frame), LagSpec{n_priors}), preset);
}

double CorrelationMatrix::at(std::string_view a, std::string_view b) const {
  auto find = [&](std::string_view name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(Errc::InvalidArgument, "no correlation entry for '" + std::string(name) + "'");
    return static_cast<Eigen::Index>(it - names.begin());
  };
  return r(find(a), find(b));
}

CorrelationMatrix pearson(const Matrix& data, const std::vector<std::string>& names) {
  if (data.rows() < 2) throw Error(Errc::TooFewRows, "correlation needs at least 2 rows");
  if (names.size() != static_cast<std::size_t>(data.cols())) throw Error(Errc::ColumnMismatch, "one name per column required");
  const auto n = static_cast<double>(data.rows());
  CorrelationMatrix out;
  std::vector<Eigen::VectorXd> centered;
  std::vector<double> norms;
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    Eigen::VectorXd col = data.col(c);
    col.array() -= col.sum() / n;
    const double norm = col.norm();
    if (!(norm > 0.0)) {
      out.excluded.push_back(names[static_cast<std::size_t>(c)]);
      continue;
    }
    out.names.push_back(names[static_cast<std::size_t>(c)]);
    centered.push_back(std::move(col));
    norms.push_back(norm);
  }
  const auto k = static_cast<Eigen::Index>(centered.size());
  out.r.resize(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    out.r(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < k; ++b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      const double v = std::clamp(centered[ua].dot(centered[ub]) / (norms[ua] * norms[ub]), -1.0, 1.0);
      out.r(a, b) = out.r(b, a) = v;
    }
  }
  return out;
}

CorrelationMatrix pearson(const FeatureMatrix& matrix) {
  Matrix data(matrix.features.rows(), matrix.features.cols() + 1);
  data.leftCols(matrix.features.cols()) = matrix.features;
  data.col(matrix.features.cols()) = matrix.target;
  auto names = matrix.column_names;
  names.emplace_back(dataio::kTargetColumn);
  return pearson(data, names);
}

double r2_score(const Vector& actual, const Vector& predicted) {
  if (actual.size() != predicted.size()) throw Error(Errc::ColumnMismatch, "r2: lengths differ");
  const double mean = actual.mean();
  const double ss_tot = (actual.array() - mean).square().sum();
  const double ss_res = (actual - predicted).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

ImportanceReport permutation_importance(const Predictor& predict, const Matrix& features, const Vector& target,
                                        const std::vector<std::string>& names, std::size_t repeats,
                                        std::uint64_t seed, std::size_t threads) {
  if (repeats == 0) throw Error(Errc::InvalidArgument, "permutation importance needs at least one repeat");
  if (names.size() != static_cast<std::size_t>(features.cols())) {
    throw Error(Errc::ColumnMismatch, "one name per feature column required");
  }
  if (features.rows() != target.size()) throw Error(Errc::ColumnMismatch, "feature rows and target length differ");

  ImportanceReport report;
  report.baseline_score = r2_score(target, predict(features));
  report.features.resize(names.size());
  parallel_for(
      names.size(),
      [&](std::size_t f) {
        Rng rng(seed, f);
        Matrix shuffled = features;
        const auto col = static_cast<Eigen::Index>(f);
        std::vector<double> values(static_cast<std::size_t>(features.rows()));
        auto& entry = report.features[f];
        entry.feature = names[f];
        for (std::size_t k = 0; k < repeats; ++k) {
          for (Eigen::Index r = 0; r < features.rows(); ++r) values[static_cast<std::size_t>(r)] = features(r, col);
          rng.shuffle(values);
          for (Eigen::Index r = 0; r < features.rows(); ++r) shuffled(r, col) = values[static_cast<std::size_t>(r)];
          entry.drops.push_back(report.baseline_score - r2_score(target, predict(shuffled)));
        }
        double sum = 0.0;
        for (double d : entry.drops) sum += d;
        entry.mean_drop = sum / static_cast<double>(repeats);
        if (repeats > 1) {
          double ss = 0.0;
          for (double d : entry.drops) ss += (d - entry.mean_drop) * (d - entry.mean_drop);
          entry.std_drop = std::sqrt(ss / static_cast<double>(repeats - 1));
        }
      },
      threads);
  return report;
}

ImportanceReport permutation_importance(const models::TrainedModel& model, const Matrix& features,
                                        const Vector& target, const std::vector<std::string>& names,
                                        std::size_t repeats, std::uint64_t seed, std::size_t threads) {
  if (names != model.schema()) throw Error(Errc::ColumnMismatch, "columns differ from the model's fit-time schema");
  return permutation_importance([&](const Matrix& x) { return model.predict(x); }, features, target, names, repeats,
                                seed, threads);
}

void write_correlation_csv(const CorrelationMatrix& corr, std::ostream& out) {
  out << "feature_a,feature_b,r\n";
  for (std::size_t a = 0; a < corr.names.size(); ++a) {
    for (std::size_t b = 0; b < corr.names.size(); ++b) {
      out << csv::quote_if_needed(corr.names[a]) << ',' << csv::quote_if_needed(corr.names[b]) << ','
          << csv::format_number(corr.r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) << '\n';
    }
  }
}

void write_importance_csv(const ImportanceReport& report, std::ostream& out) {
  out << "feature,mean_drop,std_drop\n";
  for (const auto& f : report.features) {
    out << csv::quote_if_needed(f.feature) << ',' << csv::format_number(f.mean_drop) << ','
        << csv::format_number(f.std_drop) << '\n';
  }
}

}  // namespace solarcast::features
