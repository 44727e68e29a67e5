#include "fixture.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace solarcast;

void BM_ParseSources(benchmark::State& state) {
  testdata::TempDir dir("solarcast-bench");
  testdata::SyntheticOptions opt;
  opt.days = static_cast<int>(state.range(0));
  const auto files = testdata::write_synthetic(dir.path(), opt);
  for (auto _ : state) benchmark::DoNotOptimize(dataio::parse_sources(files.pv, files.weather));
  state.SetLabel(std::to_string(opt.days) + " days");
}
BENCHMARK(BM_ParseSources)->Arg(30)->Arg(180)->Unit(benchmark::kMillisecond);

void BM_BuildFrame(benchmark::State& state) {
  testdata::TempDir dir("solarcast-bench");
  testdata::SyntheticOptions opt;
  opt.days = 180;
  const auto files = testdata::write_synthetic(dir.path(), opt);
  const auto sources = dataio::parse_sources(files.pv, files.weather);
  const auto tf = dataio::kAllTimeFrames[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(dataio::build_frame(sources, tf));
  state.SetLabel(std::string(dataio::to_string(tf)));
}
BENCHMARK(BM_BuildFrame)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
