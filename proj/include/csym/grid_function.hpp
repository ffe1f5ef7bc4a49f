#pragma once

// Nonnegative compactly supported functions sampled at cell centres of a
// uniform grid, and their (continuous) Steiner symmetrizations along a
// direction, computed fibre by fibre from superlevel sets.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "csym/interval_set.hpp"
#include "csym/scalar_map.hpp"

namespace csym {

inline constexpr std::size_t kMaxDims = 3;

using Point = std::array<double, kMaxDims>;
using Index = std::array<std::size_t, kMaxDims>;
using Matrix = std::array<std::array<double, kMaxDims>, kMaxDims>;

struct GridSpec {
  std::size_t dims = 0;
  std::vector<std::pair<double, double>> bbox;
  std::vector<std::size_t> shape;

  /// Throws std::invalid_argument unless 1 <= dims <= 3, shape[a] >= 3 and
  /// bbox max > min on every axis.
  void validate() const;

  std::size_t size() const;
  double cell_width(std::size_t axis) const {
    return (bbox[axis].second - bbox[axis].first) / static_cast<double>(shape[axis]);
  }
  double cell_center(std::size_t axis, std::size_t i) const {
    return bbox[axis].first + (static_cast<double>(i) + 0.5) * cell_width(axis);
  }
  double cell_volume() const;
  double min_cell_width() const;
  double max_cell_width() const;
  /// Row-major strides (last axis fastest).
  std::array<std::size_t, kMaxDims> strides() const;
  std::size_t flat(const Index& idx) const;
  Index unflat(std::size_t k) const;
  Point center_of(std::size_t k) const;
  bool on_boundary_layer(const Index& idx) const;
  /// Radius of the smallest origin-centred ball containing the box.
  double enclosing_radius() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// A cube-shaped spec [-half, half]^dims with n cells per axis.
GridSpec cube_grid(std::size_t dims, std::size_t n, double half);

class GridFunction {
 public:
  /// Validates the grid spec, nonnegativity and the zero boundary layer.
  GridFunction(GridSpec spec, std::vector<double> values);

  /// Samples fn at cell centres. Throws if the result violates the invariants.
  static GridFunction sample(const GridSpec& spec,
                             const std::function<double(const Point&)>& fn);
  static GridFunction zeros(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  std::size_t dims() const { return spec_.dims; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double at_index(const Index& idx) const { return values_[spec_.flat(idx)]; }

  /// Piecewise multilinear interpolation between cell centres, with zero
  /// extension outside the box.
  double at(const Point& x) const;
  /// Central differences of the interpolant with step one cell per axis.
  Point gradient_at(const Point& x) const;

  double max_value() const;
  /// Largest |u_i - u_j| / h over axis neighbours.
  double lipschitz_estimate() const;
  /// Largest |x| over cells with u > 0 (0 for the zero function).
  double support_radius() const;
  /// Number of cells with u >= c.
  std::size_t count_at_least(double c) const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// Symmetrization direction: coordinate axis `axis` of the frame obtained by
/// the orthonormal `rotation`. With rotation Q the world direction is
/// Q e_axis and fibres are extracted from x -> u(Q x) resampled on the grid.
struct Direction {
  std::size_t axis = 0;
  std::optional<Matrix> rotation;

  static Direction along(std::size_t axis) { return {axis, std::nullopt}; }
  /// Throws std::invalid_argument unless Q is orthonormal to 1e-12.
  static Direction rotated(std::size_t axis, const Matrix& q, std::size_t dims);
  /// 2-D direction (cos angle, sin angle).
  static Direction from_angle(double angle);
  /// Unit vector in 2-D or 3-D; an orthonormal frame is completed around it.
  static Direction from_vector(const Point& v, std::size_t dims);

  Point world_vector(std::size_t dims) const;
};

struct LevelGrid {
  enum class Mode { grid_values, explicit_list };
  Mode mode = Mode::grid_values;
  std::vector<double> levels;

  static LevelGrid grid_values() { return {}; }
  /// Strictly increasing positive levels; throws on empty or unsorted input.
  static LevelGrid explicit_levels(std::vector<double> levels);
};

struct FiberSets {
  std::size_t axis = 0;
  /// Fibres enumerated in row-major order of the remaining axes.
  std::vector<IntervalSet> sets;
};

/// {x_axis : u > c} on every fibre, in world coordinates, from the
/// piecewise-constant cell view. Throws std::invalid_argument for c <= 0.
FiberSets superlevel_fibers(const GridFunction& u, double c, const Direction& d);

/// Continuous Steiner symmetrization u^t about the hyperplane x_axis = 0.
GridFunction csts(const GridFunction& u, FlowTime t, const Direction& d,
                  const LevelGrid& levels = LevelGrid::grid_values());

/// Steiner symmetrization u^*; same as csts at t = infinity.
GridFunction steiner(const GridFunction& u, const Direction& d);

/// max(u - eps, 0). Throws for eps < 0.
GridFunction cutoff(const GridFunction& u, double eps);

/// psi(u) for a nondecreasing psi with psi(0) = 0 (checked by sampling on
/// [0, max u]).
GridFunction monotone_compose(const GridFunction& u, const ScalarMap& psi);

/// x -> u(Q x), multilinear, on the same grid.
GridFunction resample_rotated(const GridFunction& u, const Matrix& q);
/// max |resample(resample(u, Q), Q^T) - u|: the interpolation error a
/// rotated direction adds.
double rotation_roundtrip_error(const GridFunction& u, const Direction& d);

/// Multilinear resampling onto a grid with `factor` times more cells per axis.
GridFunction refine(const GridFunction& u, std::size_t factor);

Matrix transpose(const Matrix& q, std::size_t dims);

}  // namespace csym
