#include "solarcast/evaluate/split.hpp"

#include "solarcast/error.hpp"
#include "solarcast/rng.hpp"

#include <algorithm>
#include <cmath>

namespace solarcast::evaluate {

namespace {

constexpr std::uint64_t kSplitStream = 0x73706c6974ULL;

}  // namespace

std::string_view to_string(SplitMode mode) noexcept {
  return mode == SplitMode::Shuffled ? "shuffled" : "chronological";
}

std::optional<SplitMode> parse_split_mode(std::string_view text) noexcept {
  if (text == "shuffled") return SplitMode::Shuffled;
  if (text == "chronological") return SplitMode::Chronological;
  return std::nullopt;
}

SplitIndices split(std::size_t n_rows, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw Error(Errc::InvalidArgument, "test fraction must lie in (0, 1)");
  }
  if (n_rows < 10) throw Error(Errc::TooFewRows, "a split needs at least 10 rows, got " + std::to_string(n_rows));
  // The small slack keeps 0.2 * 10 at 2 despite rounding in the product.
  auto n_test = static_cast<std::size_t>(std::ceil(spec.test_fraction * static_cast<double>(n_rows) - 1e-9));
  n_test = std::clamp<std::size_t>(n_test, 1, n_rows - 1);

  SplitIndices out;
  if (spec.mode == SplitMode::Chronological) {
    for (std::size_t i = 0; i < n_rows; ++i) (i < n_rows - n_test ? out.train : out.test).push_back(i);
    return out;
  }
  Rng rng(spec.seed, kSplitStream);
  const auto perm = rng.permutation(n_rows);
  out.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

}  // namespace solarcast::evaluate
