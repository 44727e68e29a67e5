#include "solarcast/dataio.hpp"
#include "solarcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace solarcast::dataio {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using Sample = std::array<double, kWeatherFieldCount>;

// Hourly weather laid out densely from `start`; absent hours hold NaN.
struct HourlyGrid {
  DateTime start;
  std::vector<Sample> samples;

  const Sample* at(DateTime t) const {
    if (t < start) return nullptr;
    const auto offset = std::chrono::duration_cast<std::chrono::hours>(t - start).count();
    if (static_cast<std::size_t>(offset) >= samples.size()) return nullptr;
    return &samples[static_cast<std::size_t>(offset)];
  }
  DateTime last() const { return start + std::chrono::hours{samples.size() - 1}; }
};

HourlyGrid to_grid(std::span<const RawWeatherRecord> weather) {
  DateTime lo = DateTime::max(), hi = DateTime::min();
  for (const auto& r : weather) {
    const auto t = floor_to(r.timestamp, std::chrono::hours{1});
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  HourlyGrid grid;
  grid.start = lo;
  Sample blank;
  blank.fill(kNaN);
  grid.samples.assign(static_cast<std::size_t>(std::chrono::duration_cast<std::chrono::hours>(hi - lo).count()) + 1,
                      blank);
  std::vector<bool> seen(grid.samples.size(), false);
  for (const auto& r : weather) {
    const auto t = floor_to(r.timestamp, std::chrono::hours{1});
    const auto k = static_cast<std::size_t>(std::chrono::duration_cast<std::chrono::hours>(t - lo).count());
    if (seen[k]) continue;  // first record of a duplicated hour wins
    seen[k] = true;
    grid.samples[k] = r.values;
  }
  return grid;
}

Sample blank_sample() {
  Sample s;
  s.fill(kNaN);
  return s;
}

Sample weather_for_window(const HourlyGrid& grid, DateTime t, TimeFrame frame) {
  using std::chrono::hours;
  using std::chrono::minutes;
  switch (frame) {
    case TimeFrame::OneHour: {
      const auto* s = grid.at(t);
      return s ? *s : blank_sample();
    }
    case TimeFrame::ThirtyMin: {
      const auto hour_start = floor_to(t, hours{1});
      const auto* a = grid.at(hour_start);
      if (!a) return blank_sample();
      if (t == hour_start) return *a;
      const auto* b = grid.at(hour_start + hours{1});
      if (!b) return blank_sample();
      Sample out;
      const double frac = static_cast<double>((t - hour_start).count()) / 3600.0;
      for (std::size_t f = 0; f < kWeatherFieldCount; ++f) {
        out[f] = (*a)[f] + frac * ((*b)[f] - (*a)[f]);
      }
      return out;
    }
    case TimeFrame::FourHours: {
      Sample out;
      const auto& fields = weather_fields();
      for (std::size_t f = 0; f < kWeatherFieldCount; ++f) {
        double sum = 0.0;
        int n = 0;
        for (int h = 0; h < 4; ++h) {
          const auto* s = grid.at(t + hours{h});
          if (s && !std::isnan((*s)[f])) {
            sum += (*s)[f];
            ++n;
          }
        }
        if (n == 0) {
          out[f] = kNaN;
        } else if (fields[f].aggregation == Aggregation::Sum) {
          out[f] = sum * 4.0 / n;
        } else {
          out[f] = sum / n;
        }
      }
      return out;
    }
  }
  return blank_sample();
}

// Fills NaNs in one strided column in place; returns the number filled.
std::size_t fill_column(double* data, std::ptrdiff_t stride, std::size_t n,
                        std::span<const DateTime> times, const std::string& name) {
  std::vector<std::size_t> observed;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isnan(data[static_cast<std::ptrdiff_t>(i) * stride])) observed.push_back(i);
  }
  if (observed.size() == n) return 0;
  if (observed.size() < 2) {
    throw Error(Errc::ColumnAllMissing,
                "column '" + name + "' has " + std::to_string(observed.size()) +
                    " observed values; at least 2 are needed");
  }
  auto at = [&](std::size_t i) -> double& { return data[static_cast<std::ptrdiff_t>(i) * stride]; };
  std::size_t filled = 0;
  for (std::size_t i = 0; i < observed.front(); ++i, ++filled) at(i) = at(observed.front());
  for (std::size_t i = observed.back() + 1; i < n; ++i, ++filled) at(i) = at(observed.back());
  for (std::size_t k = 0; k + 1 < observed.size(); ++k) {
    const std::size_t a = observed[k], b = observed[k + 1];
    if (b == a + 1) continue;
    const double ta = static_cast<double>(times[a].time_since_epoch().count());
    const double tb = static_cast<double>(times[b].time_since_epoch().count());
    for (std::size_t i = a + 1; i < b; ++i, ++filled) {
      const double w = (static_cast<double>(times[i].time_since_epoch().count()) - ta) / (tb - ta);
      at(i) = at(a) + w * (at(b) - at(a));
    }
  }
  return filled;
}

}  // namespace

std::optional<std::size_t> AlignedFrame::column_index(std::string_view name) const {
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - column_names.begin());
}

AlignedFrame align(std::span<const RawWeatherRecord> weather, const IntervalEnergySeries& energy,
                   TimeFrame frame) {
  if (energy.frame != frame) {
    throw Error(Errc::FrameMismatch, "energy series is " + std::string(to_string(energy.frame)) +
                                         ", requested " + std::string(to_string(frame)));
  }
  if (weather.empty() || energy.size() == 0) throw Error(Errc::NoOverlap, "an input source is empty");

  const auto grid = to_grid(weather);
  // Last window whose weather span lies inside the weather coverage.
  const auto span_hours = frame == TimeFrame::FourHours ? std::chrono::hours{3} : std::chrono::hours{0};
  const DateTime lo = std::max(grid.start, energy.timestamps.front());
  const DateTime hi = std::min(grid.last() - span_hours, energy.timestamps.back());

  AlignedFrame out;
  out.frame = frame;
  for (const auto& f : weather_fields()) out.column_names.emplace_back(f.column);

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < energy.size(); ++i) {
    if (energy.timestamps[i] >= lo && energy.timestamps[i] <= hi) rows.push_back(i);
  }
  if (rows.empty()) throw Error(Errc::NoOverlap, "weather and PV series do not overlap in time");

  out.features.resize(static_cast<Eigen::Index>(rows.size()), kWeatherFieldCount);
  out.target.resize(static_cast<Eigen::Index>(rows.size()));
  out.timestamps.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = rows[r];
    const auto t = energy.timestamps[i];
    out.timestamps.push_back(t);
    const auto sample = weather_for_window(grid, t, frame);
    for (std::size_t f = 0; f < kWeatherFieldCount; ++f) {
      out.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) = sample[f];
    }
    out.target[static_cast<Eigen::Index>(r)] = energy.missing_mask[i] ? kNaN : energy.energy_kwh[i];
  }
  return out;
}

AlignedFrame interpolate_missing(const AlignedFrame& frame, InterpolationReport* report) {
  AlignedFrame out = frame;
  const auto n = out.rows();
  const auto cols = static_cast<std::size_t>(out.features.cols());
  InterpolationReport local;
  local.filled_per_column.assign(cols + 1, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    const auto& name = c < out.column_names.size() ? out.column_names[c] : std::to_string(c);
    local.filled_per_column[c] =
        fill_column(out.features.data() + c, out.features.cols(), n, out.timestamps, name);
  }
  local.filled_per_column[cols] =
      fill_column(out.target.data(), 1, n, out.timestamps, std::string(kTargetColumn));
  for (auto v : local.filled_per_column) local.total_filled += v;
  if (report) *report = std::move(local);
  return out;
}

}  // namespace solarcast::dataio
