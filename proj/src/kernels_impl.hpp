#pragma once

#include <cstddef>
#include <vector>

namespace csym::kernels::detail {

inline constexpr std::size_t kBlock = 256;
inline constexpr std::size_t kLanes = 4;

inline double pairwise(const double* p, std::size_t n) {
  if (n == 1) return p[0];
  const std::size_t half = n / 2;
  return pairwise(p, half) + pairwise(p + half, n - half);
}

/// Pairwise tree over per-block partials; block(begin, end) reduces one block.
template <class BlockFn>
double blocked_reduce(std::size_t n, BlockFn&& block) {
  if (n == 0) return 0.0;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  if (blocks == 1) return block(0, n);
  std::vector<double> partial(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * kBlock;
    const std::size_t end = begin + kBlock < n ? begin + kBlock : n;
    partial[b] = block(begin, end);
  }
  return pairwise(partial.data(), blocks);
}

inline double fold_lanes(const double* lane) { return (lane[0] + lane[1]) + (lane[2] + lane[3]); }

}  // namespace csym::kernels::detail
