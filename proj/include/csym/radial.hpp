#pragma once

// Radial solutions u = u(r) of the quasilinear problem by shooting in flux
// form: with Phi(r) = int_{r0}^r s^{N-1} f(s, u(s)) ds the equation reads
//   r^{N-1} g(-u'(r)) = Phi(r),
// marched outward from u(r0) = u0, u'(r0) = 0 until u first vanishes at r = R.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "csym/equation.hpp"
#include "csym/grid_function.hpp"

namespace csym {

class RadialSolveError : public std::runtime_error {
 public:
  enum class Kind { zero_flux, no_boundary, negative_flux, out_of_range };
  RadialSolveError(Kind kind, double where, const std::string& what)
      : std::runtime_error(what), kind_(kind), where_(where) {}
  Kind kind() const { return kind_; }
  /// Radius at which the march stopped.
  double where() const { return where_; }

 private:
  Kind kind_;
  double where_;
};

class HypothesisViolation : public std::runtime_error {
 public:
  explicit HypothesisViolation(HypothesisReport report);
  const HypothesisReport& report() const { return report_; }

 private:
  HypothesisReport report_;
};

struct RadialProfile {
  std::size_t dims = 0;
  double u0 = 0.0;
  /// r0 > 0 for annular solutions; u is constant u0 on [0, r0].
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  /// |u'(R)|
  double boundary_slope = 0.0;
  std::vector<double> r;
  /// March variable sqrt(r - r0) at the nodes.
  std::vector<double> rho;
  std::vector<double> u;
  /// u'(r) <= 0
  std::vector<double> du;

  /// Hermite interpolation in rho = sqrt(r - r0); u0 inside r0, 0 beyond R.
  double value_at(double radius) const;
  double slope_at(double radius) const;
};

struct RadialOptions {
  /// Steps across [r0, R] in the final march.
  std::size_t steps = 2048;
  double r_max = 1e3;
  double inner_radius = 0.0;
};

/// The z >= 0 with g(z) = y. Throws std::domain_error above g(z_max).
double g_inverse(const EquationSpec& spec, double y);

RadialProfile solve_radial(const EquationSpec& spec, std::size_t dims, double u0,
                           const RadialOptions& options = {});

/// |u'(R)| - lambda(R)
double overdetermined_residual(const RadialProfile& profile, const EquationSpec& spec);

struct ShootOptions {
  double u0_min = 1e-4;
  double u0_max = 1e4;
  std::size_t scan_points = 41;
  /// Radius up to which lambda and f are sampled for the hypothesis check.
  double hypothesis_radius = 10.0;
};

struct ShootResult {
  RadialProfile profile;
  double residual = 0.0;
  /// Every u0 root found in the scan bracket.
  std::vector<double> roots;
  /// True when the residual was monotone along the scan.
  bool monotone = true;
};

/// Root-finds u0 so that the Neumann datum matches lambda at R. Throws
/// HypothesisViolation when the equation data fail the standing hypotheses and
/// std::runtime_error when the scan finds no sign change.
ShootResult shoot_for_boundary(const EquationSpec& spec, std::size_t dims,
                               const RadialOptions& options = {}, const ShootOptions& shoot = {});

/// u(|x - center|) on the grid, zero outside the ball. Throws
/// std::invalid_argument when the ball would reach the boundary layer.
GridFunction rasterize(const RadialProfile& profile, const Point& center, const GridSpec& spec);

/// Surface area of the unit sphere in R^dims.
double unit_sphere_area(std::size_t dims);

}  // namespace csym
