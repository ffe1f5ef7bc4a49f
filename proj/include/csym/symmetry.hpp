#pragma once

// Numerical evidence for symmetry of a grid function: the small-t energy
// quotient of its continuous Steiner symmetrization, gradient relations at
// level-matched reflected points, and the decomposition of the support into
// annuli around fitted centres plus a critical set.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csym/grid_function.hpp"
#include "csym/scalar_map.hpp"

namespace csym {

struct EnergyDerivative {
  double value = 0.0;
  double uncertainty = 0.0;
  /// Tolerance the value was compared against.
  double tolerance = 0.0;
  bool symmetric = false;
  /// t values whose largest fibre displacement reaches the resolution floor,
  /// and their quotients D(t). Only these enter the extrapolation.
  std::vector<double> t_used;
  std::vector<double> quotients;
  std::vector<double> t_skipped;
};

/// 0.2 * 2^-k for k = 0..7.
std::vector<double> default_t_list();

/// 10 h max G'(|grad u|), with G' by central differences.
double default_energy_tolerance(const GridFunction& u, const ScalarMap& G);

/// Extrapolates D(t) = (E(u) - E(u^t)) / t to t = 0 from the t whose largest
/// centre displacement t max|x_axis| spans at least 4 cells (at least the 3
/// largest t are always used). Throws std::invalid_argument unless t_list
/// has 3 or more entries, strictly decreasing in (0, 1). A nonpositive tol
/// selects default_energy_tolerance.
EnergyDerivative energy_derivative(const GridFunction& u, const ScalarMap& G, const Direction& d,
                                   std::span<const double> t_list, double tol = 0.0);

/// The first point y + tau e, tau > 0, where the fibre through y falls back
/// to the level u(y); nullopt (NOT_FOUND) when the fibre leaves the support
/// or the box first. Throws std::invalid_argument unless 0 < u(y) < max u
/// and the slope along e exceeds grad_tol.
std::optional<Point> reflection_point(const GridFunction& u, const Point& y, const Direction& d,
                                      double grad_tol = 0.0);

struct ReflectionPair {
  Point y{};
  std::optional<Point> reflected;
  /// |d_e u(y) + d_e u(y~)|
  double normal_residual = 0.0;
  /// |P (grad u(y) - grad u(y~))|, P the projection orthogonal to e.
  double tangential_residual = 0.0;

  double residual() const { return std::max(normal_residual, tangential_residual); }
};

struct LocalSymmetry {
  Direction direction;
  std::vector<ReflectionPair> pairs;
  double max_residual = 0.0;
  std::size_t not_found = 0;
  bool pass = true;
};

/// Cell centres with lo_frac max < u < hi_frac max and slope along e above
/// grad_tol, thinned to at most max_points by a fixed stride.
std::vector<Point> default_samples(const GridFunction& u, const Direction& d, double grad_tol,
                                   std::size_t max_points = 400, double lo_frac = 0.1,
                                   double hi_frac = 0.9);

LocalSymmetry local_symmetry_check(const GridFunction& u, const Direction& d,
                                   std::span<const Point> samples, double tol);

struct Annulus {
  Point center{};
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  /// RMS distance of the centre from the gradient lines of the component.
  double fit_residual = 0.0;
  std::size_t cells = 0;
  /// Fraction of component cells with grad u . (x - center) < 0.
  double decreasing_fraction = 0.0;
  /// u inside the hole never drops below the inner-boundary value.
  bool hole_ordered = true;
  bool symmetric = true;
};

enum class Classification { empty, ball_radial, disjoint_balls, annular, non_symmetric };

std::string to_string(Classification c);

struct Decomposition {
  std::vector<Annulus> annuli;
  /// 1 on critical cells that belong to S.
  std::vector<std::uint8_t> critical_mask;
  std::size_t critical_cells = 0;
  /// Small critical blobs at annulus centres, absorbed as points.
  std::vector<Point> isolated_critical_points;
  double gradient_tolerance = 0.0;
  std::size_t support_components = 0;
  bool connected = false;
  bool annuli_disjoint = true;
  Classification classification = Classification::empty;

  bool pass() const { return classification != Classification::non_symmetric; }
};

struct DecompositionOptions {
  /// Centre fit residual above fit_cells * h classifies a component as
  /// non-symmetric.
  double fit_cells = 2.0;
  /// A hole no wider than the disc where |grad u| <= tol around a
  /// nondegenerate critical point, plus this many cells, is read as r = 0;
  /// the critical cells inside it are one isolated point, not part of S.
  double collar_cells = 2.0;
  /// Smallest decreasing fraction accepted on an annulus.
  double decreasing_fraction = 0.98;
};

/// Requires dims >= 2. tol is raised to max(tol, 3 L h).
Decomposition radial_decomposition(const GridFunction& u, double tol,
                                   const DecompositionOptions& options = {});

/// K equally spaced angles in [0, 2 pi) in 2-D; in 3-D the 26 normalised
/// neighbour offsets of a cube (K is then fixed); +-e in 1-D.
std::vector<Direction> sample_directions(std::size_t dims, std::size_t k);

struct DetectOptions {
  std::size_t directions = 0;  // 0: 16 in 2-D, 26 in 3-D
  std::vector<double> t_list = default_t_list();
  /// Gradient residual tolerance; nonpositive selects 5 h L.
  double tol = 0.0;
  /// Energy tolerance; nonpositive selects default_energy_tolerance.
  double energy_tol = 0.0;
  ScalarMap G = ScalarMap::power(2.0);
  bool energy = true;
  bool decomposition = true;
};

struct SymmetryReport {
  std::vector<Direction> directions;
  std::vector<EnergyDerivative> energy;
  std::vector<LocalSymmetry> local;
  std::optional<Decomposition> decomposition;
  double gradient_tolerance = 0.0;
  /// "radial" or "locally symmetric only" (or "non-symmetric").
  std::string theorem_class;

  bool local_pass() const;
  bool energy_pass() const;
  bool pass() const;
};

SymmetryReport detect_symmetry(const GridFunction& u, const DetectOptions& options = {});

}  // namespace csym
