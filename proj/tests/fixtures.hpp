#pragma once

// Closed-form test functions shared by the unit tests and the acceptance
// runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "csym/grid_function.hpp"

namespace csym::fixtures {

using Field = std::function<double(const Point&)>;

inline double radius2(const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }

/// (1 - r^2)/4 inside the unit ball: the torsion solution for -Laplace u = 1
/// in 2-D, |grad u| = 1/2 on r = 1.
inline double torsion(const Point& x) { return std::max(0.25 * (1.0 - radius2(x)), 0.0); }

/// (1 - r^2)_+
inline double paraboloid(const Point& x) { return std::max(1.0 - radius2(x), 0.0); }

/// min(1 - r, 1/2)_+: a cone cut flat at height 1/2 over the disc r <= 1/2.
inline double plateau_cone(const Point& x) {
  return std::clamp(1.0 - std::sqrt(radius2(x)), 0.0, 0.5);
}

/// Tent on [-1, 2] with peak 1 at 0, slopes +1 and -1/2.
inline double asymmetric_tent(const Point& x) {
  const double s = x[0];
  if (s <= -1.0 || s >= 2.0) return 0.0;
  return s <= 0.0 ? 1.0 + s : 1.0 - 0.5 * s;
}

/// Symmetric tent, peak 1 at x = 0.5, support [-0.5, 1.5].
inline double shifted_tent(const Point& x) { return std::max(1.0 - std::abs(x[0] - 0.5), 0.0); }

/// int |u'|^2 for the asymmetric tent flowed for time t. The level set
/// {u > v} is (-(1 - v), 2(1 - v)); its centre (1 - v)/2 shrinks by e^-t, so
/// the flowed tent has slopes 2/(3 - s) and -2/(3 + s), s = e^-t.
inline double tent_energy(double t) {
  const double s = std::exp(-t);
  return 2.0 / (3.0 - s) + 2.0 / (3.0 + s);
}

/// sum h_i (1 - |x - c_i|^2 / rho_i^2)_+^2: C^1, compactly supported in
/// the box [-1, 1]^dims away from its boundary cells.
struct BumpSum {
  struct Bump {
    Point center{};
    double radius = 0.0;
    double height = 0.0;
  };
  std::size_t dims = 2;
  std::vector<Bump> bumps;

  double operator()(const Point& x) const {
    double acc = 0.0;
    for (const Bump& b : bumps) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < dims; ++a) d2 += (x[a] - b.center[a]) * (x[a] - b.center[a]);
      const double q = 1.0 - d2 / (b.radius * b.radius);
      if (q > 0.0) acc += b.height * q * q;
    }
    return acc;
  }

  double lipschitz() const {
    // |d/dr h (1 - r^2/rho^2)^2| peaks at r = rho / sqrt(3).
    double acc = 0.0;
    for (const Bump& b : bumps) acc += b.height * 8.0 / (3.0 * std::sqrt(3.0) * b.radius);
    return acc;
  }
};

inline BumpSum random_bumps(std::mt19937_64& rng, std::size_t dims = 2) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> centre(-0.4, 0.4);
  std::uniform_real_distribution<double> radius(0.15, 0.45);
  std::uniform_real_distribution<double> height(0.2, 1.0);
  BumpSum f;
  f.dims = dims;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    BumpSum::Bump b;
    for (std::size_t a = 0; a < dims; ++a) b.center[a] = centre(rng);
    b.radius = radius(rng);
    b.height = height(rng);
    f.bumps.push_back(b);
  }
  return f;
}

inline GridFunction sample(std::size_t dims, std::size_t n, double half, const Field& f) {
  return GridFunction::sample(cube_grid(dims, n, half), f);
}

}  // namespace csym::fixtures
