#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace solarcast::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;     // bad arguments or unreadable data
inline constexpr int kExitTraining = 3;  // fit/predict failures, schema drift

/// Runs `solarcast <command> [options]`; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace solarcast::cli
