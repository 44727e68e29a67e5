// Writes a synthetic pv.csv / weather.csv pair: solarcast_synth DIR [DAYS] [SEED]
#include "synthetic.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: solarcast_synth DIR [DAYS] [SEED]\n";
    return 2;
  }
  solarcast::testdata::SyntheticOptions options;
  if (argc > 2) options.days = std::stoi(argv[2]);
  if (argc > 3) options.seed = std::stoull(argv[3]);
  const auto files = solarcast::testdata::write_synthetic(argv[1], options);
  std::cout << files.pv.string() << '\n' << files.weather.string() << '\n';
  return 0;
}
