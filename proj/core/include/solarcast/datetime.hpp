#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace solarcast {

/// Naive local wall-clock time at second resolution. Stored on the
/// system_clock epoch but never converted between zones.
using DateTime = std::chrono::sys_seconds;

/// Accepts `mm/dd/yyyy hh:mm[:ss] AM|PM`, `mm/dd/yyyy HH:MM[:SS]`,
/// `yyyy-mm-dd[T| ]HH:MM[:SS]` and `dd.mm.yyyy HH:MM[:SS]`.
std::optional<DateTime> parse_datetime(std::string_view text);

/// `yyyy-mm-ddTHH:MM:SS`
std::string format_iso(DateTime t);

DateTime make_datetime(int year, unsigned month, unsigned day, int hour = 0,
                       int minute = 0, int second = 0);

/// Start of the window of `minutes` length that contains `t`; windows are
/// anchored at midnight.
DateTime floor_to(DateTime t, std::chrono::minutes window);

unsigned month_of(DateTime t);
int hour_of(DateTime t);

}  // namespace solarcast
