#include "solarcast/dataio.hpp"
#include "solarcast/error.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace solarcast;
using namespace solarcast::dataio;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RawWeatherRecord hourly(int hour, double temperature, double sunshine = 0.0) {
  RawWeatherRecord r;
  r.timestamp = make_datetime(2021, 6, 1, hour);
  r.values.fill(1.0);
  r[WeatherField::Temperature] = temperature;
  r[WeatherField::Sunshine] = sunshine;
  return r;
}

IntervalEnergySeries energy_grid(TimeFrame frame, int windows) {
  IntervalEnergySeries s;
  s.frame = frame;
  for (int i = 0; i < windows; ++i) {
    s.timestamps.push_back(make_datetime(2021, 6, 1) + i * window_length(frame));
    s.energy_kwh.push_back(0.1 * i);
    s.missing_mask.push_back(false);
  }
  return s;
}

std::size_t col(const AlignedFrame& f, WeatherField field) { return *f.column_index(info(field).column); }

AlignedFrame single_column(std::vector<double> values) {
  AlignedFrame f;
  f.frame = TimeFrame::OneHour;
  f.column_names = {"x"};
  f.features.resize(static_cast<Eigen::Index>(values.size()), 1);
  f.target.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    f.timestamps.push_back(make_datetime(2021, 1, 1) + std::chrono::hours{i});
    f.features(static_cast<Eigen::Index>(i), 0) = values[i];
    f.target[static_cast<Eigen::Index>(i)] = 1.0;
  }
  return f;
}

std::vector<double> column_values(const AlignedFrame& f) {
  return {f.features.data(), f.features.data() + f.features.rows()};
}

}  // namespace

TEST(Align, HalfHourIsMidpointOfSurroundingHours) {
  const std::vector<RawWeatherRecord> w = {hourly(0, 10), hourly(1, 12), hourly(2, 14)};
  const auto f = align(w, energy_grid(TimeFrame::ThirtyMin, 6), TimeFrame::ThirtyMin);
  const auto c = col(f, WeatherField::Temperature);
  ASSERT_GE(f.rows(), 2u);
  EXPECT_EQ(f.timestamps[1], make_datetime(2021, 6, 1, 0, 30));
  EXPECT_DOUBLE_EQ(f.features(0, c), 10.0);
  EXPECT_DOUBLE_EQ(f.features(1, c), 11.0);
}

TEST(Align, FourHourSumsAccumulationsAndAveragesStates) {
  const std::vector<RawWeatherRecord> w = {hourly(0, 10, 60), hourly(1, 12, 60), hourly(2, 14, 0),
                                           hourly(3, 16, 0)};
  const auto f = align(w, energy_grid(TimeFrame::FourHours, 2), TimeFrame::FourHours);
  ASSERT_EQ(f.rows(), 1u);
  EXPECT_DOUBLE_EQ(f.features(0, col(f, WeatherField::Sunshine)), 120.0);
  EXPECT_DOUBLE_EQ(f.features(0, col(f, WeatherField::Temperature)), 13.0);
}

TEST(Align, OneHourIsOneToOne) {
  const std::vector<RawWeatherRecord> w = {hourly(0, 10), hourly(1, 12), hourly(2, 14)};
  const auto f = align(w, energy_grid(TimeFrame::OneHour, 5), TimeFrame::OneHour);
  ASSERT_EQ(f.rows(), 3u);
  EXPECT_DOUBLE_EQ(f.features(2, col(f, WeatherField::Temperature)), 14.0);
  EXPECT_DOUBLE_EQ(f.target[2], 0.2);
  EXPECT_EQ(f.column_names.size(), kWeatherFieldCount);
}

TEST(Align, NoOverlapThrows) {
  std::vector<RawWeatherRecord> w = {hourly(0, 10)};
  w[0].timestamp = make_datetime(2030, 1, 1);
  try {
    align(w, energy_grid(TimeFrame::OneHour, 3), TimeFrame::OneHour);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoOverlap);
  }
}

TEST(Align, FrameMismatchThrows) {
  const std::vector<RawWeatherRecord> w = {hourly(0, 10)};
  EXPECT_THROW(align(w, energy_grid(TimeFrame::OneHour, 3), TimeFrame::FourHours), Error);
}

// Oracle: count the hourly weather stamps that also label an energy window.
TEST(Align, OneHourRowCountMatchesOverlapOracle) {
  testdata::SyntheticOptions opt;
  opt.days = 10;
  const auto data = testdata::make_synthetic(opt);
  const auto energy = cumulative_to_interval(data.pv, TimeFrame::OneHour);
  const auto f = align(data.weather, energy, TimeFrame::OneHour);
  const std::set<DateTime> labels(energy.timestamps.begin(), energy.timestamps.end());
  std::size_t overlap = 0;
  for (const auto& r : data.weather) overlap += labels.count(r.timestamp);
  EXPECT_EQ(f.rows(), overlap);
}

TEST(Interpolate, FillsInterior) {
  const auto f = interpolate_missing(single_column({1, kNaN, 3}));
  EXPECT_EQ(column_values(f), (std::vector<double>{1, 2, 3}));
}

TEST(Interpolate, EdgesTakeNearestValue) {
  const auto f = interpolate_missing(single_column({kNaN, 5, 7}));
  EXPECT_EQ(column_values(f), (std::vector<double>{5, 5, 7}));
}

TEST(Interpolate, LineThroughEndpoints) {
  const auto f = interpolate_missing(single_column({0, kNaN, kNaN, 9}));
  // Oracle: y = 0 + (9 - 0) * (t - t0) / (t3 - t0).
  const auto v = column_values(f);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(v[static_cast<std::size_t>(i)], 9.0 * i / 3.0, 1e-12);
}

TEST(Interpolate, ReportsFillCounts) {
  InterpolationReport report;
  auto frame = single_column({1, kNaN, kNaN, 4});
  frame.target[0] = kNaN;
  interpolate_missing(frame, &report);
  ASSERT_EQ(report.filled_per_column.size(), 2u);
  EXPECT_EQ(report.filled_per_column[0], 2u);
  EXPECT_EQ(report.filled_per_column[1], 1u);
  EXPECT_EQ(report.total_filled, 3u);
}

TEST(Interpolate, TooFewObservedValuesThrows) {
  try {
    interpolate_missing(single_column({kNaN, 5, kNaN}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ColumnAllMissing);
    EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
  }
}

TEST(Interpolate, Idempotent) {
  testdata::SyntheticOptions opt;
  opt.days = 6;
  opt.blank_weather_fraction = 0.05;
  opt.missing_pv_fraction = 0.05;
  const auto data = testdata::make_synthetic(opt);
  for (auto frame : kAllTimeFrames) {
    const auto aligned = align(data.weather, cumulative_to_interval(data.pv, frame), frame);
    const auto once = interpolate_missing(aligned);
    const auto twice = interpolate_missing(once);
    EXPECT_EQ(once.features, twice.features);
    EXPECT_EQ(once.target, twice.target);
    EXPECT_FALSE(once.features.hasNaN());
    EXPECT_FALSE(once.target.hasNaN());
  }
}

TEST(BuildFrame, TimestampsUniformAndCsvRoundTrips) {
  testdata::SyntheticOptions opt;
  opt.days = 5;
  const auto data = testdata::make_synthetic(opt);
  ParsedSources sources;
  sources.pv.records = data.pv;
  sources.weather.records = data.weather;
  for (auto tf : kAllTimeFrames) {
    IngestLog log;
    const auto frame = build_frame(sources, tf, &log);
    EXPECT_EQ(log.rows, frame.rows());
    for (std::size_t i = 1; i < frame.rows(); ++i) {
      ASSERT_EQ(frame.timestamps[i] - frame.timestamps[i - 1], window_length(tf));
    }
    std::stringstream buffer;
    write_frame_csv(frame, buffer);
    const auto back = read_frame_csv(buffer);
    EXPECT_EQ(back.frame, tf);
    EXPECT_EQ(back.timestamps, frame.timestamps);
    EXPECT_EQ(back.column_names, frame.column_names);
    // Six significant digits on disk.
    for (Eigen::Index r = 0; r < frame.features.rows(); ++r) {
      for (Eigen::Index c = 0; c < frame.features.cols(); ++c) {
        ASSERT_NEAR(back.features(r, c), frame.features(r, c), 1e-5 * (1.0 + std::abs(frame.features(r, c))));
      }
    }
  }
}

TEST(BuildFrame, FrameFileRejectsIrregularSpacing) {
  std::istringstream in("timestamp,x,target_kwh\n2021-01-01T00:00:00,1,1\n2021-01-01T01:00:00,1,1\n"
                        "2021-01-01T03:00:00,1,1\n");
  EXPECT_THROW(read_frame_csv(in), Error);
}
