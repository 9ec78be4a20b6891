#include "hle/kernels.hpp"

#if defined(HLE_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>

namespace hle::kernels {

namespace avx2 {

inline std::int64_t hsum(__m256i v) {
  const __m128i lo = _mm256_castsi256_si128(v);
  const __m128i hi = _mm256_extracti128_si256(v, 1);
  const __m128i s = _mm_add_epi64(lo, hi);
  return _mm_cvtsi128_si64(s) + _mm_extract_epi64(s, 1);
}

inline __m256i load(const std::int64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// Lane masks are all-ones (-1) when true; subtracting them counts.

std::int64_t count_in_range(std::span<const std::int64_t> t, std::int64_t lo, std::int64_t hi) {
  const __m256i vlo = _mm256_set1_epi64x(lo);
  const __m256i vhi = _mm256_set1_epi64x(hi);
  __m256i acc = _mm256_setzero_si256();
  const std::size_t n = t.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = load(t.data() + i);
    const __m256i below = _mm256_cmpgt_epi64(vlo, v);  // v < lo
    const __m256i in_hi = _mm256_cmpgt_epi64(vhi, v);  // v < hi
    acc = _mm256_sub_epi64(acc, _mm256_andnot_si256(below, in_hi));
  }
  std::int64_t total = hsum(acc);
  for (; i < n; ++i) total += (lo <= t[i]) & (t[i] < hi);
  return total;
}

std::int64_t count_workload(std::span<const std::int64_t> occ, std::span<const std::int64_t> trig,
                            std::int64_t lo, std::int64_t hi) {
  const __m256i vlo = _mm256_set1_epi64x(lo);
  const __m256i vhi = _mm256_set1_epi64x(hi);
  __m256i acc = _mm256_setzero_si256();
  const std::size_t n = occ.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i o = load(occ.data() + i);
    const __m256i g = load(trig.data() + i);
    const __m256i occurs = _mm256_andnot_si256(_mm256_cmpgt_epi64(vlo, o), _mm256_cmpgt_epi64(vhi, o));
    const __m256i waiting = _mm256_and_si256(_mm256_cmpgt_epi64(vhi, g), _mm256_cmpgt_epi64(o, vlo));
    acc = _mm256_sub_epi64(acc, _mm256_or_si256(occurs, waiting));
  }
  std::int64_t total = hsum(acc);
  for (; i < n; ++i) {
    const bool occurs = lo <= occ[i] && occ[i] < hi;
    const bool waiting = trig[i] < hi && occ[i] > lo;
    total += occurs | waiting;
  }
  return total;
}

CrossingStats crossing(std::span<const std::int64_t> trigger, std::span<const std::int64_t> completion,
                       std::int64_t lo, std::int64_t hi) {
  const __m256i vlo = _mm256_set1_epi64x(lo);
  const __m256i vhi = _mm256_set1_epi64x(hi);
  __m256i count = _mm256_setzero_si256();
  __m256i wait = _mm256_setzero_si256();
  const std::size_t n = trigger.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i t1 = load(trigger.data() + i);
    const __m256i t2 = load(completion.data() + i);
    const __m256i mask = _mm256_andnot_si256(_mm256_cmpgt_epi64(vlo, t2), _mm256_cmpgt_epi64(vhi, t1));
    const __m256i capped = _mm256_blendv_epi8(t2, vhi, _mm256_cmpgt_epi64(t2, vhi));
    count = _mm256_sub_epi64(count, mask);
    wait = _mm256_add_epi64(wait, _mm256_and_si256(mask, _mm256_sub_epi64(capped, t1)));
  }
  CrossingStats s{hsum(count), hsum(wait)};
  for (; i < n; ++i) {
    if (trigger[i] < hi && completion[i] >= lo) {
      ++s.count;
      s.wait += std::min(completion[i], hi) - trigger[i];
    }
  }
  return s;
}

}  // namespace avx2

const KernelTable* avx2_table() {
  static constexpr KernelTable table{&avx2::count_in_range, &avx2::count_workload, &avx2::crossing};
  return &table;
}

}  // namespace hle::kernels

#else

namespace hle::kernels {

const KernelTable* avx2_table() { return nullptr; }

}  // namespace hle::kernels

#endif
