#include "csym/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace csym::kernels {

#ifndef CSYM_BUILD_AVX2
const Table* avx2_table() { return nullptr; }
#endif

bool host_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

struct Active {
  const Table* table;
  Isa isa;
};

Active pick_default() {
  const char* forced = std::getenv("CSYM_ISA");
  const bool want_scalar = forced != nullptr && std::string(forced) == "scalar";
  if (!want_scalar && avx2_table() != nullptr && host_supports_avx2()) {
    return {avx2_table(), Isa::avx2};
  }
  return {&scalar_table(), Isa::scalar};
}

std::atomic<const Table*>& active_table() {
  static std::atomic<const Table*> table{pick_default().table};
  return table;
}

std::atomic<Isa>& active_isa_slot() {
  static std::atomic<Isa> isa{pick_default().isa};
  return isa;
}

const Table& table() { return *active_table().load(std::memory_order_relaxed); }

void check_same_size(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

Isa active_isa() { return active_isa_slot().load(); }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool select_isa(Isa isa) {
  const Table* t = isa == Isa::avx2 ? (host_supports_avx2() ? avx2_table() : nullptr)
                                    : &scalar_table();
  if (t == nullptr) return false;
  active_table().store(t);
  active_isa_slot().store(isa);
  return true;
}

double sum(std::span<const double> x) { return table().sum(x.data(), x.size()); }

double dot(std::span<const double> x, std::span<const double> y) {
  check_same_size(x, y);
  return table().dot(x.data(), y.data(), x.size());
}

double abs_diff_sum(std::span<const double> x, std::span<const double> y) {
  check_same_size(x, y);
  return table().abs_diff_sum(x.data(), y.data(), x.size());
}

double sq_diff_sum(std::span<const double> x, std::span<const double> y) {
  check_same_size(x, y);
  return table().sq_diff_sum(x.data(), y.data(), x.size());
}

double pow_diff_sum(std::span<const double> x, std::span<const double> y, double p) {
  check_same_size(x, y);
  if (p == 1.0) return abs_diff_sum(x, y);
  if (p == 2.0) return sq_diff_sum(x, y);
  const double* a = x.data();
  const double* b = y.data();
  return detail::blocked_reduce(x.size(), [&](std::size_t begin, std::size_t end) {
    double lane[detail::kLanes] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = begin;
    for (; i + detail::kLanes <= end; i += detail::kLanes) {
      for (std::size_t j = 0; j < detail::kLanes; ++j) {
        lane[j] += std::pow(std::fabs(a[i + j] - b[i + j]), p);
      }
    }
    double acc = detail::fold_lanes(lane);
    for (; i < end; ++i) acc += std::pow(std::fabs(a[i] - b[i]), p);
    return acc;
  });
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  check_same_size(x, y);
  return table().max_abs_diff(x.data(), y.data(), x.size());
}

std::size_t count_at_least(std::span<const double> x, double threshold) {
  return table().count_at_least(x.data(), x.size(), threshold);
}

}  // namespace csym::kernels
