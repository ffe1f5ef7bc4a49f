#include "csym/scalar_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace csym {

namespace {

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

ScalarMap ScalarMap::identity() {
  return {"identity", [](double z) { return z; }};
}

ScalarMap ScalarMap::constant(double c) {
  return {"constant(" + fmt_num(c) + ")", [c](double) { return c; }};
}

ScalarMap ScalarMap::affine(double a, double b) {
  return {"affine(" + fmt_num(a) + "," + fmt_num(b) + ")",
          [a, b](double z) { return a + b * z; }};
}

ScalarMap ScalarMap::power(double exponent, double scale) {
  if (!(exponent > 0.0)) throw std::invalid_argument("power map needs a positive exponent");
  return {"power(" + fmt_num(exponent) + "," + fmt_num(scale) + ")",
          [exponent, scale](double z) { return z > 0.0 ? scale * std::pow(z, exponent) : 0.0; }};
}

ScalarMap ScalarMap::truncation(double cap) {
  return {"min(z," + fmt_num(cap) + ")", [cap](double z) { return std::min(z, cap); }};
}

ScalarMap ScalarMap::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("table map needs >= 2 matching nodes");
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i] < xs[i + 1])) throw std::invalid_argument("table nodes must increase strictly");
  }
  return {"table[" + std::to_string(xs.size()) + "]",
          [xs = std::move(xs), ys = std::move(ys)](double z) {
            if (z <= xs.front()) return ys.front();
            if (z >= xs.back()) return ys.back();
            const auto it = std::upper_bound(xs.begin(), xs.end(), z);
            const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
            const double w = (z - xs[k]) / (xs[k + 1] - xs[k]);
            return (1.0 - w) * ys[k] + w * ys[k + 1];
          }};
}

SourceMap SourceMap::constant(double c) {
  return {"constant(" + fmt_num(c) + ")", [c](double, double) { return c; }};
}

SourceMap SourceMap::separable_sum(ScalarMap of_r, ScalarMap of_v) {
  std::string name = of_r.name() + "(r)+" + of_v.name() + "(v)";
  return {std::move(name), [a = std::move(of_r), b = std::move(of_v)](double r, double v) {
            return a(r) + b(v);
          }};
}

double midpoint_convexity_defect(const ScalarMap& f, double lo, double hi, int samples) {
  double worst = 0.0;
  const double dz = (hi - lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    for (int j = i + 2; j < samples; j += 2) {
      const double a = lo + i * dz;
      const double b = lo + j * dz;
      const double m = lo + ((i + j) / 2) * dz;
      const double chord = 0.5 * (f(a) + f(b));
      const double scale = 1.0 + std::abs(chord);
      worst = std::max(worst, (f(m) - chord) / scale - 1e-12);
    }
  }
  return std::max(worst, 0.0);
}

double monotonicity_defect(const ScalarMap& f, double lo, double hi, int samples) {
  double worst = 0.0;
  const double dz = (hi - lo) / (samples - 1);
  double prev = f(lo);
  for (int i = 1; i < samples; ++i) {
    const double cur = f(lo + i * dz);
    worst = std::max(worst, prev - cur);
    prev = cur;
  }
  return worst;
}

}  // namespace csym
