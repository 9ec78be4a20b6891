#include "hle/framing.hpp"

#include "hle/errors.hpp"

namespace hle {

Framing::Framing(TimePoint origin, Duration width) : origin_(origin), width_(width) {
  if (width_.count() <= 0) throw ConfigError("window width must be positive");
}

Framing Framing::anchored_at_first_day(const EventLog& log, Duration width) {
  return Framing(floor_to_day(log.min_time()), width);
}

WindowIndex Framing::window_of(TimePoint t) const noexcept {
  const std::int64_t offset = (t - origin_).count();
  const std::int64_t w = width_.count();
  std::int64_t q = offset / w;
  if (offset % w != 0 && offset < 0) --q;
  return q;
}

WindowBounds Framing::bounds(WindowIndex w) const noexcept {
  return {start_of(w), start_of(w + 1)};
}

WindowSet window_set(const Framing& framing, const EventLog& log) {
  if (log.empty()) throw Error("no events");
  return {framing.window_of(log.min_time()), framing.window_of(log.max_time())};
}

}  // namespace hle
