#include "solarcast/csv.hpp"
#include "solarcast/dataio.hpp"
#include "solarcast/error.hpp"

#include <fstream>
#include <limits>
#include <ostream>

namespace solarcast::dataio {

void write_frame_csv(const AlignedFrame& frame, std::ostream& out) {
  out << kTimestampColumn;
  for (const auto& name : frame.column_names) out << ',' << csv::quote_if_needed(name);
  out << ',' << kTargetColumn << '\n';
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    out << format_iso(frame.timestamps[r]);
    for (Eigen::Index c = 0; c < frame.features.cols(); ++c) {
      out << ',' << csv::format_number(frame.features(row, c));
    }
    out << ',' << csv::format_number(frame.target[row]) << '\n';
  }
}

void write_frame_csv(const AlignedFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, "cannot write " + path.string());
  write_frame_csv(frame, out);
}

AlignedFrame read_frame_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, "no such frame file: " + path.string());
  return read_frame_csv(in);
}

AlignedFrame read_frame_csv(std::istream& in) {
  std::string line;
  if (!csv::next_line(in, line, true)) throw Error(Errc::SchemaMismatch, "empty frame file");
  const auto header = csv::split_line(line);
  if (header.size() < 2 || header.front() != kTimestampColumn || header.back() != kTargetColumn) {
    throw Error(Errc::SchemaMismatch, "frame header must start with 'timestamp' and end with 'target_kwh'");
  }

  AlignedFrame frame;
  frame.column_names.assign(header.begin() + 1, header.end() - 1);
  const auto n_features = frame.column_names.size();
  std::vector<double> values;
  std::vector<double> target;
  std::size_t row = 0;
  while (csv::next_line(in, line)) {
    ++row;
    const auto fields = csv::split_line(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::ParseError, "expected " + std::to_string(header.size()) + " fields", row);
    }
    const auto ts = parse_datetime(fields.front());
    if (!ts) throw Error(Errc::ParseError, "bad timestamp '" + fields.front() + "'", row);
    frame.timestamps.push_back(*ts);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      double v = std::numeric_limits<double>::quiet_NaN();
      if (fields[c] != "nan" && !fields[c].empty()) {
        const auto parsed = csv::parse_double(fields[c]);
        if (!parsed) throw Error(Errc::ParseError, "non-numeric '" + fields[c] + "'", row);
        v = *parsed;
      }
      (c + 1 == fields.size() ? target : values).push_back(v);
    }
  }

  const auto n = static_cast<Eigen::Index>(frame.timestamps.size());
  frame.features = Eigen::Map<const Matrix>(values.data(), n, static_cast<Eigen::Index>(n_features));
  frame.target = Eigen::Map<const Vector>(target.data(), n);

  if (frame.timestamps.size() >= 2) {
    const auto step = std::chrono::duration_cast<std::chrono::minutes>(frame.timestamps[1] - frame.timestamps[0]);
    bool matched = false;
    for (auto tf : kAllTimeFrames) {
      if (window_length(tf) == step) {
        frame.frame = tf;
        matched = true;
      }
    }
    if (!matched) throw Error(Errc::FrameMismatch, "row spacing matches no supported time frame");
    for (std::size_t i = 1; i < frame.timestamps.size(); ++i) {
      if (frame.timestamps[i] - frame.timestamps[i - 1] != step) {
        throw Error(Errc::FrameMismatch, "row spacing is not uniform", i + 1);
      }
    }
  }
  return frame;
}

ParsedSources parse_sources(const std::filesystem::path& pv_path,
                            const std::filesystem::path& weather_path) {
  return {parse_pv(pv_path), parse_weather(weather_path)};
}

AlignedFrame build_frame(const ParsedSources& sources, TimeFrame frame, IngestLog* log) {
  const auto energy = cumulative_to_interval(sources.pv.records, frame);
  const auto aligned = align(sources.weather.records, energy, frame);
  InterpolationReport fill;
  auto filled = interpolate_missing(aligned, &fill);
  if (log) {
    log->pv_records = sources.pv.records.size();
    log->pv_rejects = sources.pv.rejects.size();
    log->pv_out_of_range = sources.pv.out_of_range.size();
    log->weather_records = sources.weather.records.size();
    log->weather_rejects = sources.weather.rejects.size();
    log->weather_out_of_range = sources.weather.out_of_range.size();
    log->weather_cadence_violations = sources.weather.cadence_violations;
    log->meter_resets = energy.negative_deltas;
    log->empty_windows = energy.empty_windows;
    log->rows = filled.rows();
    log->filled_values = fill.total_filled;
  }
  return filled;
}

}  // namespace solarcast::dataio
