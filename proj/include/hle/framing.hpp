#pragma once

#include <cstdint>

#include "hle/event_log.hpp"
#include "hle/time.hpp"

namespace hle {

using WindowIndex = std::int64_t;

struct WindowBounds {
  TimePoint start;  // inclusive
  TimePoint end;    // exclusive
};

// Fixed-width tumbling windows anchored at `origin`. Window w covers the
// half-open interval [origin + w*width, origin + (w+1)*width).
class Framing {
 public:
  // Throws ConfigError unless width > 0.
  Framing(TimePoint origin, Duration width);

  // Origin at midnight of the first event's day.
  static Framing anchored_at_first_day(const EventLog& log, Duration width);

  TimePoint origin() const noexcept { return origin_; }
  Duration width() const noexcept { return width_; }

  WindowIndex window_of(TimePoint t) const noexcept;
  WindowBounds bounds(WindowIndex w) const noexcept;
  TimePoint start_of(WindowIndex w) const noexcept { return origin_ + w * width_; }

 private:
  TimePoint origin_;
  Duration width_;
};

// Contiguous index range [first, last], including windows without events.
struct WindowSet {
  WindowIndex first = 0;
  WindowIndex last = -1;

  std::size_t size() const noexcept {
    return last < first ? 0 : static_cast<std::size_t>(last - first + 1);
  }
  bool contains(WindowIndex w) const noexcept { return first <= w && w <= last; }
};

// Throws Error("no events") on an empty log.
WindowSet window_set(const Framing& framing, const EventLog& log);

}  // namespace hle
