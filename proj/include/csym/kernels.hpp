#pragma once

// Cell-sum reductions behind the integral functionals. Each kernel has a
// portable scalar reference and an AVX2 variant; the variant is picked once at
// runtime from the host CPU (CSYM_ISA=scalar forces the reference).
//
// Summation order is fixed: 4 interleaved lane accumulators inside blocks of
// 256 values, then a pairwise tree over block partials. Both variants follow
// that order exactly, so their results agree bit for bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace csym::kernels {

enum class Isa { scalar, avx2 };

struct Table {
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*abs_diff_sum)(const double* x, const double* y, std::size_t n);
  double (*sq_diff_sum)(const double* x, const double* y, std::size_t n);
  double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
  std::size_t (*count_at_least)(const double* x, std::size_t n, double threshold);
};

const Table& scalar_table();
/// nullptr when the AVX2 variant was not compiled in.
const Table* avx2_table();
bool host_supports_avx2();

Isa active_isa();
std::string_view isa_name(Isa isa);
/// Switches the process-wide variant; returns false if it is unavailable.
bool select_isa(Isa isa);

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double abs_diff_sum(std::span<const double> x, std::span<const double> y);
double sq_diff_sum(std::span<const double> x, std::span<const double> y);
/// sum |x - y|^p; p = 1, 2 take the vector paths.
double pow_diff_sum(std::span<const double> x, std::span<const double> y, double p);
double max_abs_diff(std::span<const double> x, std::span<const double> y);
std::size_t count_at_least(std::span<const double> x, double threshold);

}  // namespace csym::kernels
