#pragma once

// Window-scan kernels over structure-of-arrays time columns (milliseconds
// since epoch). Each feature value is one masked reduction over a
// component's columns for a half-open window [lo, hi).
//
// A scalar reference and an AVX2 variant exist for every kernel; the
// active one is chosen at first use from CPUID and can be overridden for
// equivalence testing.

#include <cstdint>
#include <span>
#include <string_view>

namespace hle::kernels {

// Trigger column entry for events that nothing triggers. Never < any
// window end, so such events only count through their occurrence time.
inline constexpr std::int64_t kNoTrigger = INT64_MAX;

struct CrossingStats {
  std::int64_t count = 0;
  // Sum over crossing steps of min(completion, hi) - trigger.
  std::int64_t wait = 0;

  friend bool operator==(const CrossingStats&, const CrossingStats&) = default;
};

struct KernelTable {
  // #{i : lo <= t[i] < hi}
  std::int64_t (*count_in_range)(std::span<const std::int64_t> t, std::int64_t lo, std::int64_t hi);
  // #{i : lo <= occ[i] < hi  or  (trig[i] < hi and occ[i] > lo)}
  std::int64_t (*count_workload)(std::span<const std::int64_t> occ, std::span<const std::int64_t> trig,
                                 std::int64_t lo, std::int64_t hi);
  // Steps with trigger[i] < hi and completion[i] >= lo.
  CrossingStats (*crossing)(std::span<const std::int64_t> trigger, std::span<const std::int64_t> completion,
                            std::int64_t lo, std::int64_t hi);
};

enum class Isa { scalar, avx2 };

const KernelTable& scalar_table();
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table();

Isa best_isa();
Isa active_isa();
// Throws ConfigError when the requested ISA is unavailable.
void set_active_isa(Isa isa);
std::string_view isa_name(Isa isa);

const KernelTable& active();

inline std::int64_t count_in_range(std::span<const std::int64_t> t, std::int64_t lo, std::int64_t hi) {
  return active().count_in_range(t, lo, hi);
}

inline std::int64_t count_workload(std::span<const std::int64_t> occ, std::span<const std::int64_t> trig,
                                   std::int64_t lo, std::int64_t hi) {
  return active().count_workload(occ, trig, lo, hi);
}

inline CrossingStats crossing(std::span<const std::int64_t> trigger, std::span<const std::int64_t> completion,
                              std::int64_t lo, std::int64_t hi) {
  return active().crossing(trigger, completion, lo, hi);
}

}  // namespace hle::kernels
