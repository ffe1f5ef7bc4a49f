#pragma once

// Cell-sum integral functionals (midpoint rule on cells) and the
// rearrangement inequalities they satisfy between u and its CStS u^t.

#include <functional>
#include <vector>

#include "csym/grid_function.hpp"
#include "csym/scalar_map.hpp"

namespace csym {

/// (sum |u - v|^p * cell volume)^(1/p). Throws std::invalid_argument on grid
/// mismatch or p < 1.
double lp_distance(const GridFunction& u, const GridFunction& v, double p);

/// sum F(u) * cell volume.
double cavalieri(const GridFunction& u, const ScalarMap& F);

/// sum u v * cell volume.
double hardy_littlewood(const GridFunction& u, const GridFunction& v);

/// Per-cell gradient: central differences where both axis neighbours lie in
/// the support, one-sided toward the support at its edge, 0 off the support.
std::vector<Point> cell_gradients(const GridFunction& u);

/// |cell_gradients(u)| per cell.
std::vector<double> gradient_magnitudes(const GridFunction& u);

/// sum G(|grad u|) * cell volume.
double dirichlet_energy(const GridFunction& u, const ScalarMap& G);

struct EnergyValue {
  double value = 0.0;
  /// False when G failed the sampled midpoint-convexity or G(0) = 0 check;
  /// the value is still computed.
  bool admissible = true;
};
EnergyValue dirichlet_energy_checked(const GridFunction& u, const ScalarMap& G);

/// F(x, v) for the weighted inequality. The x-dependence must be declared to
/// be even in the symmetrization coordinate and nonincreasing in its modulus.
struct WeightedIntegrand {
  std::function<double(const Point&, double)> F;
  bool declared_even_nonincreasing = false;

  /// w(|x_axis|) * v with w nonincreasing (checked on [0, extent]).
  static WeightedIntegrand axis_weight(ScalarMap w, std::size_t axis, double extent);
  /// w(|x|) * v with w nonincreasing (checked on [0, extent]).
  static WeightedIntegrand radial_weight(ScalarMap w, double extent);
};

/// sum F(x_cell, u_cell) * cell volume. Throws std::invalid_argument when the
/// structure has not been declared.
double weighted_functional(const GridFunction& u, const WeightedIntegrand& F);

/// Lebesgue measure of {0 < u <= s}. Throws for s <= 0.
double boundary_layer_measure(const GridFunction& u, double s);

/// One evaluated inequality lhs <= rhs. margin = rhs - lhs, negative when the
/// discrete values violate the stated direction. Equalities use
/// margin = -|rhs - lhs|.
struct InequalityMargin {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double cell_width = 0.0;

  double violation() const { return margin < 0.0 ? -margin : 0.0; }
};

InequalityMargin nonexpansivity_check(const GridFunction& u, const GridFunction& v, FlowTime t,
                                      const Direction& d, double p);
InequalityMargin cavalieri_check(const GridFunction& u, FlowTime t, const Direction& d,
                                 const ScalarMap& F);
InequalityMargin hardy_littlewood_check(const GridFunction& u, const GridFunction& v, FlowTime t,
                                        const Direction& d);
/// Throws std::invalid_argument when G is not admissible (convex, G(0) = 0).
InequalityMargin polya_szego_check(const GridFunction& u, FlowTime t, const Direction& d,
                                   const ScalarMap& G);
InequalityMargin weighted_check(const GridFunction& u, FlowTime t, const Direction& d,
                                const WeightedIntegrand& F);

}  // namespace csym
