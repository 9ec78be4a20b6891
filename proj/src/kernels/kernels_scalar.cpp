#include <algorithm>

#include "hle/kernels.hpp"

namespace hle::kernels {

namespace scalar {

std::int64_t count_in_range(std::span<const std::int64_t> t, std::int64_t lo, std::int64_t hi) {
  std::int64_t n = 0;
  for (const std::int64_t v : t) n += (lo <= v) & (v < hi);
  return n;
}

std::int64_t count_workload(std::span<const std::int64_t> occ, std::span<const std::int64_t> trig,
                            std::int64_t lo, std::int64_t hi) {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const bool occurs = lo <= occ[i] && occ[i] < hi;
    const bool waiting = trig[i] < hi && occ[i] > lo;
    n += occurs | waiting;
  }
  return n;
}

CrossingStats crossing(std::span<const std::int64_t> trigger, std::span<const std::int64_t> completion,
                       std::int64_t lo, std::int64_t hi) {
  CrossingStats s;
  for (std::size_t i = 0; i < trigger.size(); ++i) {
    if (trigger[i] < hi && completion[i] >= lo) {
      ++s.count;
      s.wait += std::min(completion[i], hi) - trigger[i];
    }
  }
  return s;
}

}  // namespace scalar

const KernelTable& scalar_table() {
  static constexpr KernelTable table{&scalar::count_in_range, &scalar::count_workload, &scalar::crossing};
  return table;
}

}  // namespace hle::kernels
