#pragma once

#include "solarcast/datetime.hpp"
#include "solarcast/matrix.hpp"

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace solarcast::dataio {

// ---------------------------------------------------------------------------
// Time frames

enum class TimeFrame { ThirtyMin, OneHour, FourHours };

inline constexpr std::array<TimeFrame, 3> kAllTimeFrames = {
    TimeFrame::ThirtyMin, TimeFrame::OneHour, TimeFrame::FourHours};

constexpr int window_minutes(TimeFrame frame) noexcept {
  switch (frame) {
    case TimeFrame::ThirtyMin: return 30;
    case TimeFrame::OneHour: return 60;
    case TimeFrame::FourHours: return 240;
  }
  return 60;
}

static_assert(1440 % window_minutes(TimeFrame::ThirtyMin) == 0);
static_assert(1440 % window_minutes(TimeFrame::OneHour) == 0);
static_assert(1440 % window_minutes(TimeFrame::FourHours) == 0);

inline std::chrono::minutes window_length(TimeFrame frame) noexcept {
  return std::chrono::minutes{window_minutes(frame)};
}

/// "30min", "1h", "4h"
std::string_view to_string(TimeFrame frame) noexcept;
std::optional<TimeFrame> parse_time_frame(std::string_view text) noexcept;

// ---------------------------------------------------------------------------
// Raw records

/// Documented range of the cumulative meter column. Values outside it are
/// reported by the parser, never altered.
inline constexpr double kPvValueMin = -3600.0;
inline constexpr double kPvValueMax = 365365.0;

struct RawPvRecord {
  std::string panel_id;
  DateTime timestamp;
  double cumulative_kwh = 0.0;
  std::string unit;
};

enum class WeatherField : std::size_t {
  CloudCoverage,
  AirPressure,
  Temperature,
  RelativeHumidity,
  WindDirection,
  WindSpeedMax,
  WindSpeedAvg,
  Precipitation,
  Ghi,
  Sunshine,
};

inline constexpr std::size_t kWeatherFieldCount = 10;

/// How a field is combined when several hourly samples fall into one window.
enum class Aggregation { Mean, Sum };

struct WeatherFieldInfo {
  WeatherField field;
  std::string_view column;  // snake_case name used in frame files
  std::string_view header;  // header text of the source file
  std::string_view unit;
  double min;
  double max;
  Aggregation aggregation;
};

const std::array<WeatherFieldInfo, kWeatherFieldCount>& weather_fields();
const WeatherFieldInfo& info(WeatherField field);

struct RawWeatherRecord {
  DateTime timestamp;
  std::array<double, kWeatherFieldCount> values{};

  double operator[](WeatherField f) const { return values[static_cast<std::size_t>(f)]; }
  double& operator[](WeatherField f) { return values[static_cast<std::size_t>(f)]; }
};

// ---------------------------------------------------------------------------
// Parsing

struct Reject {
  std::size_t row = 0;  // 1-based data row
  std::string reason;
};

struct RangeIssue {
  std::size_t row = 0;
  std::string field;
  double value = 0.0;
};

template <typename Record>
struct ParseResult {
  std::vector<Record> records;
  std::vector<Reject> rejects;
  std::vector<RangeIssue> out_of_range;
  /// Weather only: consecutive records whose spacing is not exactly one hour.
  std::size_t cadence_violations = 0;
};

struct ParseOptions {
  /// Throw ParseError on the first malformed row instead of collecting it.
  bool strict = false;
};

/// Header must be ID, DateTime, Value, Unit (case and punctuation
/// insensitive). Throws FileNotFound / SchemaMismatch / ParseError.
ParseResult<RawPvRecord> parse_pv(const std::filesystem::path& path, ParseOptions options = {});
ParseResult<RawPvRecord> parse_pv(std::istream& in, ParseOptions options = {});

/// Header is a timestamp column followed by the ten weather fields, in any
/// order. Accepted timestamp headers: DateTime, Timestamp, Time, Date.
ParseResult<RawWeatherRecord> parse_weather(const std::filesystem::path& path,
                                            ParseOptions options = {});
ParseResult<RawWeatherRecord> parse_weather(std::istream& in, ParseOptions options = {});

// ---------------------------------------------------------------------------
// Per-window energy

struct IntervalEnergySeries {
  TimeFrame frame = TimeFrame::OneHour;
  std::vector<DateTime> timestamps;  // window labels (window start)
  std::vector<double> energy_kwh;    // NaN where missing
  std::vector<bool> missing_mask;
  std::size_t negative_deltas = 0;   // windows dropped for meter resets
  std::size_t empty_windows = 0;     // windows without any reading, summed over panels

  std::size_t size() const noexcept { return timestamps.size(); }
};

/// Converts cumulative meter readings into energy per window.
///
/// The window labelled t covers (t, t + frame]: a reading stamped exactly on a
/// boundary closes the window that ends there. The energy of a window is the
/// last reading inside it minus the last reading at or before t. A negative
/// difference (meter reset) and a window without readings are both missing,
/// and so is the first window since it has no reference reading.
/// With several panel ids, each meter is differenced on its own and the
/// window sums the panels; it is missing when any panel is missing there.
IntervalEnergySeries cumulative_to_interval(std::span<const RawPvRecord> records, TimeFrame frame);

// ---------------------------------------------------------------------------
// Aligned frames

struct AlignedFrame {
  TimeFrame frame = TimeFrame::OneHour;
  std::vector<DateTime> timestamps;
  std::vector<std::string> column_names;
  Matrix features;  // NaN marks a missing value
  Vector target;    // kWh per window, NaN when missing

  std::size_t rows() const noexcept { return timestamps.size(); }
  std::optional<std::size_t> column_index(std::string_view name) const;
};

/// Joins hourly weather onto the energy windows over the common time range.
/// One hour: 1:1. Thirty minutes: the half-hour row is the midpoint of the
/// two surrounding hourly samples. Four hours: mean over the contained hours
/// for state variables, sum for precipitation and sunshine (scaled up when
/// some of the hours are absent).
AlignedFrame align(std::span<const RawWeatherRecord> weather, const IntervalEnergySeries& energy,
                   TimeFrame frame);

struct InterpolationReport {
  std::vector<std::size_t> filled_per_column;  // features first, target last
  std::size_t total_filled = 0;
};

/// Fills every NaN in features and target: linear in time between observed
/// neighbours, nearest observed value at the ends. Throws ColumnAllMissing
/// when a column has fewer than two observed values.
AlignedFrame interpolate_missing(const AlignedFrame& frame, InterpolationReport* report = nullptr);

// ---------------------------------------------------------------------------
// Frame files

inline constexpr std::string_view kTimestampColumn = "timestamp";
inline constexpr std::string_view kTargetColumn = "target_kwh";

/// `timestamp` (ISO-8601), one column per feature, `target_kwh` last.
void write_frame_csv(const AlignedFrame& frame, std::ostream& out);
void write_frame_csv(const AlignedFrame& frame, const std::filesystem::path& path);

/// Reads a frame file; the time frame is inferred from the row spacing.
AlignedFrame read_frame_csv(const std::filesystem::path& path);
AlignedFrame read_frame_csv(std::istream& in);

// ---------------------------------------------------------------------------
// End-to-end ingestion

struct IngestLog {
  std::size_t pv_records = 0;
  std::size_t pv_rejects = 0;
  std::size_t pv_out_of_range = 0;
  std::size_t weather_records = 0;
  std::size_t weather_rejects = 0;
  std::size_t weather_out_of_range = 0;
  std::size_t weather_cadence_violations = 0;
  std::size_t meter_resets = 0;
  std::size_t empty_windows = 0;
  std::size_t rows = 0;
  std::size_t filled_values = 0;
};

struct ParsedSources {
  ParseResult<RawPvRecord> pv;
  ParseResult<RawWeatherRecord> weather;
};

ParsedSources parse_sources(const std::filesystem::path& pv_path,
                            const std::filesystem::path& weather_path);

/// parse -> cumulative_to_interval -> align -> interpolate_missing.
AlignedFrame build_frame(const ParsedSources& sources, TimeFrame frame, IngestLog* log = nullptr);

}  // namespace solarcast::dataio
