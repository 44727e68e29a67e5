#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solarcast::csv {

/// Splits one CSV record. Handles double-quoted fields with "" escapes;
/// fields are returned with surrounding whitespace trimmed.
std::vector<std::string> split_line(std::string_view line, char delimiter = ',');

/// Reads the next non-empty line, stripping a trailing '\r' and a UTF-8 BOM
/// on the first line.
bool next_line(std::istream& in, std::string& line, bool first = false);

/// Lower-cases and drops everything that is not a letter or digit, so
/// "Wind Speed(Max)" and "wind_speed_max" compare equal.
std::string normalize_header(std::string_view name);

std::optional<double> parse_double(std::string_view text);

/// Fixed 6 significant digits, the output format of every CSV writer.
std::string format_number(double value);

std::string quote_if_needed(std::string_view field);

}  // namespace solarcast::csv
