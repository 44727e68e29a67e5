#include "solarcast/error.hpp"

namespace solarcast {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NoOverlap: return "NoOverlap";
    case Errc::FrameMismatch: return "FrameMismatch";
    case Errc::ColumnAllMissing: return "ColumnAllMissing";
    case Errc::TooFewValues: return "TooFewValues";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::NegativeTarget: return "NegativeTarget";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::TooFewRows: return "TooFewRows";
    case Errc::ColumnMismatch: return "ColumnMismatch";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::NonFiniteFeature: return "NonFiniteFeature";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::EmptySpace: return "EmptySpace";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string decorate(Errc code, const std::string& message, std::optional<std::size_t> row) {
  std::string out(to_string(code));
  if (row) out += " (row " + std::to_string(*row) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message, std::optional<std::size_t> row)
    : std::runtime_error(decorate(code, message, row)), code_(code), row_(row) {}

}  // namespace solarcast
