#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace hle {

// All timestamps are UTC-naive and carried at millisecond resolution so
// window arithmetic stays exact.
using Duration = std::chrono::milliseconds;
using TimePoint = std::chrono::sys_time<Duration>;

inline constexpr std::string_view kIsoFormat = "%Y-%m-%dT%H:%M:%S";

// Parses `text` with a strptime-style `format`. An optional fractional
// seconds part (".123") and a trailing 'Z' are accepted after the match.
// Throws ConfigError on failure.
TimePoint parse_timestamp(std::string_view text, std::string_view format = kIsoFormat);

// Formats with strftime; appends ".mmm" only when the millisecond part is
// non-zero.
std::string format_timestamp(TimePoint t, std::string_view format = kIsoFormat);

// Accepts "<number><unit>" with unit one of ms, s, m, h, d, w, or a bare
// number of seconds. Examples: "30m", "1h", "1.5d". Must be positive.
Duration parse_duration(std::string_view text);

std::string format_duration(Duration d);

// Midnight of the day containing t.
TimePoint floor_to_day(TimePoint t);

inline std::int64_t to_millis(TimePoint t) { return t.time_since_epoch().count(); }
inline double to_seconds(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

}  // namespace hle
