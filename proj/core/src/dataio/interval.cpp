#include "solarcast/dataio.hpp"
#include "solarcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace solarcast::dataio {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Label of the window (t, t + frame] containing `reading`.
DateTime window_label(DateTime reading, std::chrono::minutes frame) {
  return floor_to(reading - std::chrono::seconds{1}, frame);
}

struct PanelSeries {
  std::vector<double> energy;  // NaN = missing
  std::size_t negative = 0;
  std::size_t empty = 0;
};

PanelSeries difference_panel(std::vector<const RawPvRecord*>& readings, DateTime grid_start,
                             std::size_t n_windows, std::chrono::minutes frame) {
  std::stable_sort(readings.begin(), readings.end(),
                   [](const RawPvRecord* a, const RawPvRecord* b) { return a->timestamp < b->timestamp; });

  const auto step = std::chrono::duration_cast<std::chrono::seconds>(frame).count();
  std::vector<double> last_in(n_windows, kNaN);
  std::vector<bool> has_reading(n_windows, false);
  for (const auto* r : readings) {
    const auto w = static_cast<std::size_t>((window_label(r->timestamp, frame) - grid_start).count() / step);
    last_in[w] = r->cumulative_kwh;
    has_reading[w] = true;
  }

  PanelSeries out;
  out.energy.assign(n_windows, kNaN);
  std::optional<double> reference;
  for (std::size_t w = 0; w < n_windows; ++w) {
    if (!has_reading[w]) {
      ++out.empty;
      continue;
    }
    if (reference) {
      const double delta = last_in[w] - *reference;
      if (delta >= 0.0) {
        out.energy[w] = delta;
      } else {
        ++out.negative;
      }
    }
    reference = last_in[w];
  }
  return out;
}

}  // namespace

IntervalEnergySeries cumulative_to_interval(std::span<const RawPvRecord> records, TimeFrame frame) {
  if (records.empty()) throw Error(Errc::EmptyInput, "no PV readings to difference");
  const auto len = window_length(frame);

  std::map<std::string, std::vector<const RawPvRecord*>> panels;
  DateTime first = records.front().timestamp;
  DateTime last = first;
  for (const auto& r : records) {
    panels[r.panel_id].push_back(&r);
    first = std::min(first, r.timestamp);
    last = std::max(last, r.timestamp);
  }

  const DateTime grid_start = window_label(first, len);
  const DateTime grid_end = window_label(last, len);
  const auto n_windows = static_cast<std::size_t>((grid_end - grid_start) / len) + 1;

  IntervalEnergySeries series;
  series.frame = frame;
  series.timestamps.reserve(n_windows);
  for (std::size_t w = 0; w < n_windows; ++w) series.timestamps.push_back(grid_start + w * len);
  series.energy_kwh.assign(n_windows, 0.0);

  for (auto& [id, readings] : panels) {
    const auto panel = difference_panel(readings, grid_start, n_windows, len);
    series.negative_deltas += panel.negative;
    for (std::size_t w = 0; w < n_windows; ++w) series.energy_kwh[w] += panel.energy[w];
    series.empty_windows += panel.empty;
  }

  series.missing_mask.resize(n_windows);
  for (std::size_t w = 0; w < n_windows; ++w) {
    series.missing_mask[w] = std::isnan(series.energy_kwh[w]);
  }
  return series;
}

}  // namespace solarcast::dataio
