#include "solarcast/datetime.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace solarcast {

namespace {

using namespace std::chrono;

// Minimal cursor over the timestamp text.
struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_spaces() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() const { return pos >= s.size(); }
  bool eat(char c) {
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::optional<int> number(std::size_t max_digits) {
    std::size_t end = pos;
    while (end < s.size() && end - pos < max_digits && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    if (end == pos) return std::nullopt;
    int v = 0;
    std::from_chars(s.data() + pos, s.data() + end, v);
    pos = end;
    return v;
  }
};

std::optional<DateTime> build(int y, int mo, int d, int h, int mi, int sec) {
  if (mo < 1 || mo > 12 || d < 1 || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 60) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

// Parses "HH:MM[:SS][ AM|PM]" starting at the cursor.
bool parse_clock(Cursor& c, int& h, int& mi, int& sec) {
  c.skip_spaces();
  if (c.done()) {
    h = mi = sec = 0;
    return true;
  }
  auto hh = c.number(2);
  if (!hh || !c.eat(':')) return false;
  auto mm = c.number(2);
  if (!mm) return false;
  int ss = 0;
  if (c.eat(':')) {
    auto s2 = c.number(2);
    if (!s2) return false;
    ss = *s2;
    if (c.eat('.')) c.number(9);  // fractional seconds are dropped
  }
  h = *hh;
  mi = *mm;
  sec = ss;
  c.skip_spaces();
  if (c.done()) return true;
  const auto rest = c.s.substr(c.pos);
  if (rest.size() < 2) return false;
  const char a = static_cast<char>(std::toupper(static_cast<unsigned char>(rest[0])));
  const char m = static_cast<char>(std::toupper(static_cast<unsigned char>(rest[1])));
  if (m != 'M' || (a != 'A' && a != 'P')) return false;
  if (h < 1 || h > 12) return false;
  if (a == 'A' && h == 12) h = 0;
  if (a == 'P' && h != 12) h += 12;
  c.pos += 2;
  c.skip_spaces();
  return c.done();
}

}  // namespace

std::optional<DateTime> parse_datetime(std::string_view text) {
  Cursor c{text};
  c.skip_spaces();
  const std::size_t start = c.pos;
  auto first = c.number(4);
  if (!first) return std::nullopt;
  const std::size_t first_len = c.pos - start;

  int y = 0, mo = 0, d = 0;
  if (first_len == 4 && c.eat('-')) {
    auto m2 = c.number(2);
    if (!m2 || !c.eat('-')) return std::nullopt;
    auto d2 = c.number(2);
    if (!d2) return std::nullopt;
    y = *first;
    mo = *m2;
    d = *d2;
    if (!c.eat('T')) c.skip_spaces();
  } else if (first_len <= 2 && c.eat('/')) {
    auto d2 = c.number(2);
    if (!d2 || !c.eat('/')) return std::nullopt;
    auto y2 = c.number(4);
    if (!y2) return std::nullopt;
    mo = *first;
    d = *d2;
    y = *y2;
  } else if (first_len <= 2 && c.eat('.')) {
    auto m2 = c.number(2);
    if (!m2 || !c.eat('.')) return std::nullopt;
    auto y2 = c.number(4);
    if (!y2) return std::nullopt;
    d = *first;
    mo = *m2;
    y = *y2;
  } else {
    return std::nullopt;
  }

  int h = 0, mi = 0, sec = 0;
  if (!parse_clock(c, h, mi, sec)) return std::nullopt;
  return build(y, mo, d, h, mi, sec);
}

std::string format_iso(DateTime t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

DateTime make_datetime(int year_, unsigned month_, unsigned day_, int hour, int minute, int second) {
  auto t = build(year_, static_cast<int>(month_), static_cast<int>(day_), hour, minute, second);
  if (!t) return DateTime{};
  return *t;
}

DateTime floor_to(DateTime t, std::chrono::minutes window) {
  const auto s = t.time_since_epoch().count();
  const auto w = duration_cast<seconds>(window).count();
  auto q = s / w;
  if (s % w < 0) --q;
  return DateTime{seconds{q * w}};
}

unsigned month_of(DateTime t) {
  return static_cast<unsigned>(year_month_day{floor<days>(t)}.month());
}

int hour_of(DateTime t) {
  const auto day_point = floor<days>(t);
  return static_cast<int>(duration_cast<hours>(t - day_point).count());
}

}  // namespace solarcast
