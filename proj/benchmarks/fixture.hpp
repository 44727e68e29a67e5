#pragma once

#include "solarcast/dataio.hpp"
#include "solarcast/features.hpp"
#include "synthetic.hpp"

#include <map>

namespace bench {

// Synthetic one-hour frame with calendar features and one prior lag, built
// once per process.
inline const solarcast::features::FeatureMatrix& hourly_features(int days) {
  static std::map<int, solarcast::features::FeatureMatrix> cache;
  auto it = cache.find(days);
  if (it != cache.end()) return it->second;
  solarcast::testdata::TempDir dir("solarcast-bench");
  solarcast::testdata::SyntheticOptions opt;
  opt.days = days;
  const auto files = solarcast::testdata::write_synthetic(dir.path(), opt);
  const auto sources = solarcast::dataio::parse_sources(files.pv, files.weather);
  const auto frame = solarcast::dataio::build_frame(sources, solarcast::dataio::TimeFrame::OneHour);
  return cache.emplace(days, solarcast::features::build_features(frame, solarcast::features::Preset::Reduced, 1))
      .first->second;
}

}  // namespace bench
