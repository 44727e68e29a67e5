#pragma once

// Deterministic Tartu-like PV and weather records for tests and benchmarks.

#include "solarcast/dataio.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace solarcast::testdata {

struct SyntheticOptions {
  int days = 60;
  int start_year = 2021;
  unsigned start_month = 4;
  unsigned start_day = 1;
  std::uint64_t seed = 7;
  double capacity_kw = 1.5;
  double noise = 0.03;               // relative noise on PV power
  double drift = 0.08;               // hourly step of a persistent log-efficiency drift
  double missing_pv_fraction = 0.0;  // readings dropped at random
  double blank_weather_fraction = 0.0;
  bool meter_reset = false;  // meter restarts from zero mid-series
};

struct SyntheticData {
  std::vector<dataio::RawPvRecord> pv;
  std::vector<dataio::RawWeatherRecord> weather;
};

SyntheticData make_synthetic(const SyntheticOptions& options = {});

/// Header ID,DateTime,Value,Unit; timestamps as mm/dd/yyyy hh:mm:ss AM/PM.
void write_pv_csv(const std::vector<dataio::RawPvRecord>& records, std::ostream& out);
/// DateTime plus the ten weather columns under their display names.
void write_weather_csv(const std::vector<dataio::RawWeatherRecord>& records, std::ostream& out);

struct SyntheticFiles {
  std::filesystem::path pv;
  std::filesystem::path weather;
};

SyntheticFiles write_synthetic(const std::filesystem::path& dir, const SyntheticOptions& options = {});

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "solarcast");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace solarcast::testdata
