#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace blab {

// Civil calendar date (proleptic Gregorian).
struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
  friend auto operator<=>(const CivilDate&, const CivilDate&) = default;
};

namespace detail {

// Days from 1970-01-01 to year-month-day (Howard Hinnant's civil algorithm).
constexpr std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                   static_cast<int>(d)};
}

}  // namespace detail

// Point in time, stored as seconds since the Unix epoch, always UTC.
struct UtcTime {
  std::int64_t seconds = 0;

  friend bool operator==(const UtcTime&, const UtcTime&) = default;
  friend auto operator<=>(const UtcTime&, const UtcTime&) = default;
};

// Closed interval [start, end].
struct TimeWindow {
  UtcTime start;
  UtcTime end;

  bool contains(UtcTime t) const { return start <= t && t <= end; }
};

// Display/reporting timezone for the whole system. Fixed offset: Brazil has
// not observed DST since 2019.
inline constexpr std::int64_t kSaoPauloOffsetSeconds = -3 * 3600;

inline UtcTime make_utc(int y, int mo, int d, int h = 0, int mi = 0,
                        int s = 0, std::int64_t utc_offset_seconds = 0) {
  return UtcTime{detail::days_from_civil(y, mo, d) * 86400 + h * 3600 +
                 mi * 60 + s - utc_offset_seconds};
}

inline CivilDate utc_date(UtcTime t) {
  std::int64_t days = t.seconds / 86400;
  if (t.seconds % 86400 < 0) --days;
  return detail::civil_from_days(days);
}

inline CivilDate local_date(UtcTime t) {
  return utc_date(UtcTime{t.seconds + kSaoPauloOffsetSeconds});
}

// Seconds since local midnight in America/Sao_Paulo.
inline int local_seconds_of_day(UtcTime t) {
  std::int64_t s = (t.seconds + kSaoPauloOffsetSeconds) % 86400;
  if (s < 0) s += 86400;
  return static_cast<int>(s);
}

inline UtcTime local_midnight(CivilDate d) {
  return make_utc(d.year, d.month, d.day, 0, 0, 0, kSaoPauloOffsetSeconds);
}

// Local calendar day as a UTC window [00:00:00, 23:59:59].
inline TimeWindow local_day_window(CivilDate d) {
  UtcTime start = local_midnight(d);
  return TimeWindow{start, UtcTime{start.seconds + 86400 - 1}};
}

inline std::string format_iso_utc(UtcTime t) {
  CivilDate d = utc_date(t);
  std::int64_t rem = t.seconds % 86400;
  if (rem < 0) rem += 86400;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year,
                d.month, d.day, static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

inline std::string format_date(CivilDate d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

namespace detail {

inline bool read_int(const std::string& s, size_t pos, size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

inline std::optional<CivilDate> parse_date(const std::string& s) {
  int y, mo, d;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!detail::read_int(s, 0, 4, y) || !detail::read_int(s, 5, 2, mo) ||
      !detail::read_int(s, 8, 2, d))
    return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
  return CivilDate{y, mo, d};
}

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM", "YYYY-MM-DDTHH:MM:SS", each with
// an optional trailing "Z", "±HH:MM" or "±HHMM" offset.
inline std::optional<UtcTime> parse_iso(const std::string& s) {
  if (s.size() < 10) return std::nullopt;
  auto date = parse_date(s.substr(0, 10));
  if (!date) return std::nullopt;
  int h = 0, mi = 0, sec = 0;
  std::int64_t offset = 0;
  size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
    ++pos;
    if (!detail::read_int(s, pos, 2, h) || pos + 2 >= s.size() ||
        s[pos + 2] != ':' || !detail::read_int(s, pos + 3, 2, mi))
      return std::nullopt;
    pos += 5;
    if (pos + 1 < s.size() && s[pos] == ':') {
      if (!detail::read_int(s, pos + 1, 2, sec)) return std::nullopt;
      pos += 3;
    }
  }
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z' && pos + 1 == s.size()) {
      offset = 0;
    } else if (c == '+' || c == '-') {
      int oh = 0, om = 0;
      size_t rest = s.size() - pos - 1;
      if (rest == 5 && s[pos + 3] == ':') {
        if (!detail::read_int(s, pos + 1, 2, oh) ||
            !detail::read_int(s, pos + 4, 2, om))
          return std::nullopt;
      } else if (rest == 4) {
        if (!detail::read_int(s, pos + 1, 2, oh) ||
            !detail::read_int(s, pos + 3, 2, om))
          return std::nullopt;
      } else {
        return std::nullopt;
      }
      offset = (oh * 3600 + om * 60) * (c == '-' ? -1 : 1);
    } else {
      return std::nullopt;
    }
  }
  if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
  return make_utc(date->year, date->month, date->day, h, mi, sec, offset);
}

// Floor of whole days elapsed from `earlier` to `later`; negative input order
// yields a negative count.
inline std::int64_t whole_days_between(UtcTime earlier, UtcTime later) {
  std::int64_t diff = later.seconds - earlier.seconds;
  if (diff >= 0) return diff / 86400;
  return -((-diff + 86399) / 86400);
}

}  // namespace blab
