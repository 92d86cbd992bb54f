#pragma once

#include <cstdint>
#include <string>

namespace ft {

// Epoch milliseconds, UTC. Also used for spans.
using Millis = std::int64_t;

constexpr Millis kMillisPerSecond = 1000;
constexpr Millis kMillisPerMinute = 60 * kMillisPerSecond;
constexpr Millis kMillisPerHour = 60 * kMillisPerMinute;
constexpr Millis kMillisPerDay = 24 * kMillisPerHour;

// UTC day index (floor division; handles pre-epoch timestamps).
inline std::int64_t utc_day_index(Millis ts) {
  std::int64_t d = ts / kMillisPerDay;
  if (ts % kMillisPerDay < 0) --d;
  return d;
}

struct CivilDate {
  int year;
  unsigned month;  // 1-12
  unsigned day;    // 1-31
};

// Days-since-epoch to civil date (Gregorian, proleptic) and back.
CivilDate civil_from_days(std::int64_t days);
std::int64_t days_from_civil(CivilDate date);

struct Quarter {
  int year;
  int index;  // 1-4

  bool operator==(const Quarter&) const = default;
  auto operator<=>(const Quarter&) const = default;
};

Quarter quarter_of(Millis ts);

// "2021Q4"
std::string to_string(const Quarter& q);

}  // namespace ft
