#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace solarcast::evaluate {

enum class SplitMode { Shuffled, Chronological };

std::string_view to_string(SplitMode mode) noexcept;
std::optional<SplitMode> parse_split_mode(std::string_view text) noexcept;

struct SplitSpec {
  double test_fraction = 0.2;
  SplitMode mode = SplitMode::Shuffled;
  std::uint64_t seed = 42;
};

/// Row indices, each list ascending.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// ceil(test_fraction * n) test rows: a seeded sample (shuffled) or the last
/// rows (chronological). Throws TooFewRows below 10 rows and
/// InvalidArgument for a fraction outside (0, 1).
SplitIndices split(std::size_t n_rows, const SplitSpec& spec);

}  // namespace solarcast::evaluate
