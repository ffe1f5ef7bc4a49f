#include <immintrin.h>

#include "csym/kernels.hpp"
#include "kernels_impl.hpp"

namespace csym::kernels {

namespace {

using detail::blocked_reduce;
using detail::fold_lanes;
using detail::kLanes;

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Lane j of the accumulator sees exactly the same terms, in the same order,
// as lane j of the scalar reference.
template <class Vec, class Tail>
double lane_block(std::size_t begin, std::size_t end, Vec&& vec, Tail&& tail) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = begin;
  for (; i + kLanes <= end; i += kLanes) acc = _mm256_add_pd(acc, vec(i));
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, acc);
  double out = fold_lanes(lane);
  for (; i < end; ++i) out += tail(i);
  return out;
}

double sum_avx2(const double* x, std::size_t n) {
  return blocked_reduce(n, [&](std::size_t b, std::size_t e) {
    return lane_block(
        b, e, [&](std::size_t i) { return _mm256_loadu_pd(x + i); },
        [&](std::size_t i) { return x[i]; });
  });
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  return blocked_reduce(n, [&](std::size_t b, std::size_t e) {
    return lane_block(
        b, e,
        [&](std::size_t i) { return _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)); },
        [&](std::size_t i) { return x[i] * y[i]; });
  });
}

double abs_diff_sum_avx2(const double* x, const double* y, std::size_t n) {
  return blocked_reduce(n, [&](std::size_t b, std::size_t e) {
    return lane_block(
        b, e,
        [&](std::size_t i) {
          return abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        },
        [&](std::size_t i) {
          const double d = x[i] - y[i];
          return d < 0.0 ? -d : d;
        });
  });
}

double sq_diff_sum_avx2(const double* x, const double* y, std::size_t n) {
  return blocked_reduce(n, [&](std::size_t b, std::size_t e) {
    return lane_block(
        b, e,
        [&](std::size_t i) {
          const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
          return _mm256_mul_pd(d, d);
        },
        [&](std::size_t i) {
          const double d = x[i] - y[i];
          return d * d;
        });
  });
}

double max_abs_diff_avx2(const double* x, const double* y, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    m = _mm256_max_pd(m, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i))));
  }
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, m);
  double out = lane[0];
  for (std::size_t j = 1; j < kLanes; ++j) out = out > lane[j] ? out : lane[j];
  for (; i < n; ++i) {
    const double d = x[i] > y[i] ? x[i] - y[i] : y[i] - x[i];
    out = out > d ? out : d;
  }
  return out;
}

std::size_t count_at_least_avx2(const double* x, std::size_t n, double threshold) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), t, _CMP_GE_OQ));
    c += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i) c += x[i] >= threshold ? 1 : 0;
  return c;
}

}  // namespace

const Table* avx2_table() {
  static const Table table{sum_avx2,          dot_avx2,          abs_diff_sum_avx2,
                           sq_diff_sum_avx2,  max_abs_diff_avx2, count_at_least_avx2};
  return &table;
}

}  // namespace csym::kernels
