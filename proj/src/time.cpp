#include "hle/time.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <ctime>
#include <string>

#include "hle/errors.hpp"

namespace hle {

TimePoint parse_timestamp(std::string_view text, std::string_view format) {
  const std::string buf(text);
  const std::string fmt(format);
  std::tm tm{};
  const char* rest = ::strptime(buf.c_str(), fmt.c_str(), &tm);
  if (rest == nullptr) {
    throw ConfigError("cannot parse timestamp '" + buf + "' with format '" + fmt + "'");
  }
  std::int64_t millis = 0;
  if (*rest == '.') {
    ++rest;
    int digits = 0;
    std::int64_t scale = 100;
    while (std::isdigit(static_cast<unsigned char>(*rest))) {
      if (digits < 3) {
        millis += (*rest - '0') * scale;
        scale /= 10;
      }
      ++digits;
      ++rest;
    }
    if (digits == 0) {
      throw ConfigError("empty fractional seconds in timestamp '" + buf + "'");
    }
  }
  if (*rest == 'Z') ++rest;
  if (*rest != '\0') {
    throw ConfigError("trailing characters in timestamp '" + buf + "'");
  }
  const std::time_t secs = ::timegm(&tm);
  return TimePoint{Duration{static_cast<std::int64_t>(secs) * 1000 + millis}};
}

std::string format_timestamp(TimePoint t, std::string_view format) {
  const std::int64_t ms = to_millis(t);
  std::int64_t secs = ms / 1000;
  std::int64_t frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  const std::time_t tt = static_cast<std::time_t>(secs);
  std::tm tm{};
  ::gmtime_r(&tt, &tm);
  char out[128];
  const std::string fmt(format);
  const std::size_t n = std::strftime(out, sizeof(out), fmt.c_str(), &tm);
  std::string result(out, n);
  if (frac != 0) {
    char f[8];
    std::snprintf(f, sizeof(f), ".%03lld", static_cast<long long>(frac));
    result += f;
  }
  return result;
}

Duration parse_duration(std::string_view text) {
  if (text.empty()) throw ConfigError("empty duration");
  std::size_t split = 0;
  while (split < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[split])) || text[split] == '.')) {
    ++split;
  }
  const std::string number(text.substr(0, split));
  const std::string_view unit = text.substr(split);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(number, &used);
    if (used != number.size()) throw std::invalid_argument("partial");
  } catch (const std::exception&) {
    throw ConfigError("malformed duration '" + std::string(text) + "'");
  }
  double unit_ms = 0.0;
  if (unit.empty() || unit == "s") unit_ms = 1e3;
  else if (unit == "ms") unit_ms = 1.0;
  else if (unit == "m") unit_ms = 60e3;
  else if (unit == "h") unit_ms = 3600e3;
  else if (unit == "d") unit_ms = 86400e3;
  else if (unit == "w") unit_ms = 7 * 86400e3;
  else throw ConfigError("unknown duration unit in '" + std::string(text) + "'");
  const auto ms = static_cast<std::int64_t>(std::llround(value * unit_ms));
  if (ms <= 0) throw ConfigError("duration must be positive: '" + std::string(text) + "'");
  return Duration{ms};
}

std::string format_duration(Duration d) {
  const std::int64_t ms = d.count();
  struct Unit {
    std::int64_t ms;
    const char* suffix;
  };
  static constexpr Unit units[] = {
      {7 * 86400000LL, "w"}, {86400000LL, "d"}, {3600000LL, "h"}, {60000LL, "m"}, {1000LL, "s"}};
  for (const auto& u : units) {
    if (ms % u.ms == 0) return std::to_string(ms / u.ms) + u.suffix;
  }
  return std::to_string(ms) + "ms";
}

TimePoint floor_to_day(TimePoint t) {
  return std::chrono::floor<std::chrono::days>(t);
}

}  // namespace hle
