#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace solarcast {

enum class Errc {
  FileNotFound,
  SchemaMismatch,
  ParseError,
  EmptyInput,
  NoOverlap,
  FrameMismatch,
  ColumnAllMissing,
  TooFewValues,
  ZeroVariance,
  NegativeTarget,
  EmptyMatrix,
  TooFewRows,
  ColumnMismatch,
  DegenerateInput,
  NonFiniteInput,
  NonFiniteFeature,
  NonFiniteLoss,
  EmptySpace,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library. `row()` is set for row-level parse
/// failures and is 1-based over data rows (the header is row 0).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> row = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  Errc code_;
  std::optional<std::size_t> row_;
};

}  // namespace solarcast
