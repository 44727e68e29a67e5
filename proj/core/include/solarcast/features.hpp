#pragma once

#include "solarcast/dataio.hpp"
#include "solarcast/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solarcast::models {
class TrainedModel;
}

namespace solarcast::features {

inline constexpr std::size_t kMaxPriors = 6;
inline constexpr std::string_view kMonthColumn = "month";
inline constexpr std::string_view kHourColumn = "hour";

/// "prior_1", "prior_2", ...
std::string prior_column(std::size_t lag);

struct LagSpec {
  std::size_t n_priors = 0;  // 0..kMaxPriors
};

/// Named feature columns over time plus the kWh target.
struct FeatureMatrix {
  dataio::TimeFrame frame = dataio::TimeFrame::OneHour;
  std::vector<DateTime> timestamps;
  std::vector<std::string> column_names;
  Matrix features;
  Vector target;

  std::size_t rows() const noexcept { return timestamps.size(); }
  std::size_t cols() const noexcept { return column_names.size(); }
  std::optional<std::size_t> column_index(std::string_view name) const;

  FeatureMatrix take(std::span<const std::size_t> rows) const;
};

FeatureMatrix from_frame(const dataio::AlignedFrame& frame);

/// Appends `month` (1-12) and `hour` (0-23) of each window start.
FeatureMatrix derive_calendar(const FeatureMatrix& matrix);
inline FeatureMatrix derive_calendar(const dataio::AlignedFrame& frame) { return derive_calendar(from_frame(frame)); }

/// Appends prior_1..prior_k where prior_j at row i is the target at row
/// i - j, then drops the first k rows. Throws TooFewRows when rows <= k and
/// InvalidArgument when k > kMaxPriors.
FeatureMatrix derive_priors(const FeatureMatrix& matrix, LagSpec spec);

enum class Preset { Full, Reduced };

std::string_view to_string(Preset preset) noexcept;
std::optional<Preset> parse_preset(std::string_view text) noexcept;

/// Full keeps every column. Reduced keeps GHI, temperature, relative
/// humidity, month, hour and the prior columns.
FeatureMatrix select_preset(const FeatureMatrix& matrix, Preset preset);

/// calendar -> priors -> preset.
FeatureMatrix build_features(const dataio::AlignedFrame& frame, Preset preset, std::size_t n_priors);

/// Keeps the named columns in the given order. Throws SchemaMismatch when a
/// name is absent.
FeatureMatrix select_columns(const FeatureMatrix& matrix, const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// Analysis

struct CorrelationMatrix {
  std::vector<std::string> names;
  Matrix r;
  std::vector<std::string> excluded;  // zero-variance columns left out

  double at(std::string_view a, std::string_view b) const;
};

/// Pairwise Pearson r over the columns of `data`. Zero-variance columns are
/// dropped and listed in `excluded`. Throws TooFewRows for fewer than 2 rows.
CorrelationMatrix pearson(const Matrix& data, const std::vector<std::string>& names);

/// Features plus the target (named target_kwh).
CorrelationMatrix pearson(const FeatureMatrix& matrix);

struct FeatureImportance {
  std::string feature;
  double mean_drop = 0.0;
  double std_drop = 0.0;  // sample standard deviation over repeats; 0 for one repeat
  std::vector<double> drops;
};

struct ImportanceReport {
  double baseline_score = 0.0;  // R^2 on the unpermuted data
  std::vector<FeatureImportance> features;
};

using Predictor = std::function<Vector(const Matrix&)>;

/// Coefficient of determination 1 - SS_res / SS_tot.
double r2_score(const Vector& actual, const Vector& predicted);

/// For every column, shuffles it `repeats` times and records the drop in R^2
/// against the baseline. Column f draws from the stream (seed, f), so the
/// report does not depend on the worker count.
ImportanceReport permutation_importance(const Predictor& predict, const Matrix& features, const Vector& target,
                                        const std::vector<std::string>& names, std::size_t repeats,
                                        std::uint64_t seed, std::size_t threads = 0);

/// Same, on a fitted model; throws ColumnMismatch when `names` differ from
/// the model's schema.
ImportanceReport permutation_importance(const models::TrainedModel& model, const Matrix& features,
                                        const Vector& target, const std::vector<std::string>& names,
                                        std::size_t repeats, std::uint64_t seed, std::size_t threads = 0);

/// feature_a,feature_b,r (long form, every ordered pair).
void write_correlation_csv(const CorrelationMatrix& corr, std::ostream& out);
/// feature,mean_drop,std_drop
void write_importance_csv(const ImportanceReport& report, std::ostream& out);

}  // namespace solarcast::features
