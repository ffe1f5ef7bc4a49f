#pragma once

// Named and tabulated real maps used as equation data (g, lambda, psi, G, F)
// and as the source term f(r, v).

#include <functional>
#include <string>
#include <vector>

namespace csym {

class ScalarMap {
 public:
  using Fn = std::function<double(double)>;

  ScalarMap(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  static ScalarMap identity();
  static ScalarMap constant(double c);
  /// a + b z
  static ScalarMap affine(double a, double b);
  /// scale * z^exponent for z >= 0 (0 for z <= 0).
  static ScalarMap power(double exponent, double scale = 1.0);
  /// min(z, cap)
  static ScalarMap truncation(double cap);
  /// Piecewise linear through (xs, ys); constant beyond the ends.
  /// xs must be strictly increasing with at least two nodes.
  static ScalarMap table(std::vector<double> xs, std::vector<double> ys);

  double operator()(double z) const { return fn_(z); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

/// f(r, v), r = |x|.
class SourceMap {
 public:
  using Fn = std::function<double(double, double)>;

  SourceMap(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  static SourceMap constant(double c);
  /// a(r) + b(v)
  static SourceMap separable_sum(ScalarMap of_r, ScalarMap of_v);

  double operator()(double r, double v) const { return fn_(r, v); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

/// Checks f((a+b)/2) <= (f(a)+f(b))/2 on a uniform sample of [lo, hi].
/// Returns the largest violation (0 when convex on the sample).
double midpoint_convexity_defect(const ScalarMap& f, double lo, double hi, int samples = 257);

/// Largest drop f(z_i) - f(z_{i+1}) over a uniform sample; 0 for nondecreasing.
double monotonicity_defect(const ScalarMap& f, double lo, double hi, int samples = 257);

}  // namespace csym
