#pragma once

#include <cstddef>
#include <functional>

namespace csym {

/// Worker count: CSYM_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads using a
/// static contiguous partition. body must only write state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace csym
