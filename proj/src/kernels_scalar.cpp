#include <algorithm>
#include <cmath>

#include "csym/kernels.hpp"
#include "kernels_impl.hpp"

namespace csym::kernels {

namespace {

using detail::blocked_reduce;
using detail::fold_lanes;
using detail::kLanes;

template <class Term>
double lane_block(std::size_t begin, std::size_t end, Term&& term) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = begin;
  for (; i + kLanes <= end; i += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) lane[j] += term(i + j);
  }
  double acc = fold_lanes(lane);
  for (; i < end; ++i) acc += term(i);
  return acc;
}

double sum_ref(const double* x, std::size_t n) {
  return blocked_reduce(n, [&](std::size_t b, std::size_t e) {
    return lane_block(b, e, [&](std::size_t i) { return x[i]; });
  });
}

double dot_ref(const double* x, const double* y, std::size_t n) {
  return blocked_reduce(n, [&](std::size_t b, std::size_t e) {
    return lane_block(b, e, [&](std::size_t i) { return x[i] * y[i]; });
  });
}

double abs_diff_sum_ref(const double* x, const double* y, std::size_t n) {
  return blocked_reduce(n, [&](std::size_t b, std::size_t e) {
    return lane_block(b, e, [&](std::size_t i) { return std::fabs(x[i] - y[i]); });
  });
}

double sq_diff_sum_ref(const double* x, const double* y, std::size_t n) {
  return blocked_reduce(n, [&](std::size_t b, std::size_t e) {
    return lane_block(b, e, [&](std::size_t i) {
      const double d = x[i] - y[i];
      return d * d;
    });
  });
}

double max_abs_diff_ref(const double* x, const double* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

std::size_t count_at_least_ref(const double* x, std::size_t n, double threshold) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] >= threshold ? 1 : 0;
  return c;
}

}  // namespace

const Table& scalar_table() {
  static const Table table{sum_ref,          dot_ref,          abs_diff_sum_ref,
                           sq_diff_sum_ref,  max_abs_diff_ref, count_at_least_ref};
  return table;
}

}  // namespace csym::kernels
