#include "solarcast/csv.hpp"
#include "solarcast/dataio.hpp"
#include "solarcast/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace solarcast::dataio {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::array<WeatherFieldInfo, kWeatherFieldCount> kWeatherFields = {{
    {WeatherField::CloudCoverage, "cloud_coverage", "Cloud Coverage", "okta", 0, 9, Aggregation::Mean},
    {WeatherField::AirPressure, "air_pressure", "Air Pressure", "mbar", 964, 1043, Aggregation::Mean},
    {WeatherField::Temperature, "temperature", "Temperature", "C", -24.9, 32.5, Aggregation::Mean},
    {WeatherField::RelativeHumidity, "relative_humidity", "Relative Humidity", "%", 17, 100, Aggregation::Mean},
    {WeatherField::WindDirection, "wind_direction", "Wind Direction", "deg", 1, 360, Aggregation::Mean},
    {WeatherField::WindSpeedMax, "wind_speed_max", "Wind Speed(Max)", "m/s", 0.5, 19.3, Aggregation::Mean},
    {WeatherField::WindSpeedAvg, "wind_speed_avg", "Wind Speed(Average)", "m/s", 0.2, 8.6, Aggregation::Mean},
    {WeatherField::Precipitation, "precipitation", "Precipitation", "mm", 0, 19.6, Aggregation::Sum},
    {WeatherField::Ghi, "ghi", "Global Horizontal Irradiance", "W/m2", -1, 886, Aggregation::Mean},
    {WeatherField::Sunshine, "sunshine", "Sunshine", "min", 0, 60, Aggregation::Sum},
}};

// Normalized header spellings accepted for each weather field.
const std::map<std::string, WeatherField>& weather_aliases() {
  static const std::map<std::string, WeatherField> aliases = [] {
    std::map<std::string, WeatherField> m;
    for (const auto& f : kWeatherFields) {
      m[csv::normalize_header(f.header)] = f.field;
      m[csv::normalize_header(f.column)] = f.field;
    }
    m["cloudcover"] = WeatherField::CloudCoverage;
    m["pressure"] = WeatherField::AirPressure;
    m["humidity"] = WeatherField::RelativeHumidity;
    m["windspeedaverage"] = WeatherField::WindSpeedAvg;
    m["windspeed"] = WeatherField::WindSpeedAvg;
    m["maxwindspeed"] = WeatherField::WindSpeedMax;
    m["globalhorizontalirradiancewm2"] = WeatherField::Ghi;
    m["sunshineduration"] = WeatherField::Sunshine;
    return m;
  }();
  return aliases;
}

bool is_timestamp_header(const std::string& normalized) {
  return normalized == "datetime" || normalized == "timestamp" || normalized == "time" ||
         normalized == "date";
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(Errc::FileNotFound, "no such file: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, "cannot open: " + path.string());
  return in;
}

template <typename Record>
void reject(ParseResult<Record>& result, const ParseOptions& options, std::size_t row,
            std::string reason) {
  if (options.strict) throw Error(Errc::ParseError, reason, row);
  result.rejects.push_back({row, std::move(reason)});
}

}  // namespace

const std::array<WeatherFieldInfo, kWeatherFieldCount>& weather_fields() { return kWeatherFields; }

const WeatherFieldInfo& info(WeatherField field) {
  return kWeatherFields[static_cast<std::size_t>(field)];
}

std::string_view to_string(TimeFrame frame) noexcept {
  switch (frame) {
    case TimeFrame::ThirtyMin: return "30min";
    case TimeFrame::OneHour: return "1h";
    case TimeFrame::FourHours: return "4h";
  }
  return "1h";
}

std::optional<TimeFrame> parse_time_frame(std::string_view text) noexcept {
  if (text == "30min" || text == "30m") return TimeFrame::ThirtyMin;
  if (text == "1h" || text == "60min") return TimeFrame::OneHour;
  if (text == "4h" || text == "240min") return TimeFrame::FourHours;
  return std::nullopt;
}

ParseResult<RawPvRecord> parse_pv(const std::filesystem::path& path, ParseOptions options) {
  auto in = open_or_throw(path);
  return parse_pv(in, options);
}

ParseResult<RawPvRecord> parse_pv(std::istream& in, ParseOptions options) {
  std::string line;
  if (!csv::next_line(in, line, true)) {
    throw Error(Errc::SchemaMismatch, "missing header row; expected ID,DateTime,Value,Unit");
  }
  const auto header = csv::split_line(line);
  int id_col = -1, time_col = -1, value_col = -1, unit_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto h = csv::normalize_header(header[i]);
    const int idx = static_cast<int>(i);
    if (h == "id") id_col = idx;
    else if (h == "datetime") time_col = idx;
    else if (h == "value") value_col = idx;
    else if (h == "unit") unit_col = idx;
  }
  if (header.size() != 4 || id_col < 0 || time_col < 0 || value_col < 0 || unit_col < 0) {
    throw Error(Errc::SchemaMismatch,
                "PV header must be ID,DateTime,Value,Unit; got: " + line);
  }

  ParseResult<RawPvRecord> result;
  std::size_t row = 0;
  while (csv::next_line(in, line)) {
    ++row;
    const auto fields = csv::split_line(line);
    if (fields.size() != header.size()) {
      reject(result, options, row,
             "expected " + std::to_string(header.size()) + " fields, got " +
                 std::to_string(fields.size()));
      continue;
    }
    const auto ts = parse_datetime(fields[time_col]);
    if (!ts) {
      reject(result, options, row, "unparseable DateTime '" + fields[time_col] + "'");
      continue;
    }
    const auto value = csv::parse_double(fields[value_col]);
    if (!value || !std::isfinite(*value)) {
      reject(result, options, row, "non-numeric Value '" + fields[value_col] + "'");
      continue;
    }
    if (*value < kPvValueMin || *value > kPvValueMax) {
      result.out_of_range.push_back({row, "Value", *value});
    }
    result.records.push_back({fields[id_col], *ts, *value, fields[unit_col]});
  }
  return result;
}

ParseResult<RawWeatherRecord> parse_weather(const std::filesystem::path& path,
                                            ParseOptions options) {
  auto in = open_or_throw(path);
  return parse_weather(in, options);
}

ParseResult<RawWeatherRecord> parse_weather(std::istream& in, ParseOptions options) {
  std::string line;
  if (!csv::next_line(in, line, true)) {
    throw Error(Errc::SchemaMismatch, "missing header row in weather file");
  }
  const auto header = csv::split_line(line);
  int time_col = -1;
  std::array<int, kWeatherFieldCount> field_col;
  field_col.fill(-1);
  const auto& aliases = weather_aliases();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto h = csv::normalize_header(header[i]);
    if (time_col < 0 && is_timestamp_header(h)) {
      time_col = static_cast<int>(i);
      continue;
    }
    if (auto it = aliases.find(h); it != aliases.end()) {
      auto& slot = field_col[static_cast<std::size_t>(it->second)];
      if (slot >= 0) throw Error(Errc::SchemaMismatch, "duplicate weather column '" + header[i] + "'");
      slot = static_cast<int>(i);
    }
  }
  std::string missing;
  if (time_col < 0) missing += " DateTime";
  for (const auto& f : kWeatherFields) {
    if (field_col[static_cast<std::size_t>(f.field)] < 0) missing += " '" + std::string(f.header) + "'";
  }
  if (!missing.empty()) {
    throw Error(Errc::SchemaMismatch, "weather header lacks:" + missing + "; got: " + line);
  }

  ParseResult<RawWeatherRecord> result;
  std::size_t row = 0;
  while (csv::next_line(in, line)) {
    ++row;
    const auto fields = csv::split_line(line);
    if (fields.size() != header.size()) {
      reject(result, options, row,
             "expected " + std::to_string(header.size()) + " fields, got " +
                 std::to_string(fields.size()));
      continue;
    }
    const auto ts = parse_datetime(fields[time_col]);
    if (!ts) {
      reject(result, options, row, "unparseable timestamp '" + fields[time_col] + "'");
      continue;
    }
    RawWeatherRecord rec;
    rec.timestamp = *ts;
    bool ok = true;
    for (const auto& f : kWeatherFields) {
      const auto& text = fields[field_col[static_cast<std::size_t>(f.field)]];
      if (text.empty()) {
        rec[f.field] = kNaN;  // blank cell = missing, filled later by interpolation
        continue;
      }
      const auto v = csv::parse_double(text);
      if (!v || !std::isfinite(*v)) {
        reject(result, options, row,
               "non-numeric " + std::string(f.header) + " '" + text + "'");
        ok = false;
        break;
      }
      rec[f.field] = *v;
      if (*v < f.min || *v > f.max) result.out_of_range.push_back({row, std::string(f.column), *v});
    }
    if (!ok) continue;
    if (!result.records.empty() &&
        rec.timestamp - result.records.back().timestamp != std::chrono::hours{1}) {
      ++result.cadence_violations;
    }
    result.records.push_back(rec);
  }
  return result;
}

}  // namespace solarcast::dataio
