#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "csym/equation.hpp"
#include "csym/functionals.hpp"
#include "csym/grid_function.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace csym;

namespace {

GridFunction tent(std::size_t n = 600) { return fixtures::sample(1, n, 2.5, fixtures::asymmetric_tent); }

GridFunction indicator_1d(double a, double b) {
  // cell width 1/8, edges on multiples of 1/8.
  return fixtures::sample(1, 64, 4.0, [a, b](const Point& x) { return (x[0] > a && x[0] < b) ? 1.0 : 0.0; });
}

}  // namespace

TEST_CASE("Lp distances of simple functions") {
  const GridFunction u = tent();
  const GridFunction zero = GridFunction::zeros(u.spec());
  CHECK(lp_distance(u, u, 2.0) == 0.0);
  // area of the tent is 3/2.
  CHECK(lp_distance(u, zero, 1.0) == doctest::Approx(1.5).epsilon(1e-4));
  // int of the squared tent over [-1, 2] is 1.
  CHECK(lp_distance(u, zero, 2.0) == doctest::Approx(1.0).epsilon(1e-4));
  const GridFunction a = indicator_1d(0.0, 1.0);
  const GridFunction b = indicator_1d(0.5, 2.0);
  CHECK(lp_distance(a, b, 1.0) == doctest::Approx(1.5));
  CHECK(lp_distance(a, b, 2.0) == doctest::Approx(std::sqrt(1.5)));
  CHECK_THROWS_AS(lp_distance(a, b, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lp_distance(a, fixtures::sample(1, 32, 4.0, fixtures::asymmetric_tent), 1.0),
                  std::invalid_argument);
}

TEST_CASE("Cavalieri sums and the Hardy-Littlewood pairing") {
  const GridFunction u = tent();
  CHECK(cavalieri(u, ScalarMap::identity()) == doctest::Approx(1.5).epsilon(1e-4));
  CHECK(cavalieri(u, ScalarMap::constant(0.0)) == 0.0);
  CHECK(hardy_littlewood(u, u) == doctest::Approx(cavalieri(u, ScalarMap::power(2.0))));
  CHECK(hardy_littlewood(indicator_1d(-2.0, -1.0), indicator_1d(1.0, 2.0)) == 0.0);
  const GridFunction a = indicator_1d(-2.0, -1.0);
  const GridFunction b = indicator_1d(1.0, 2.0);
  const InequalityMargin m = hardy_littlewood_check(a, b, FlowTime::infinity(), Direction::along(0));
  CHECK(m.lhs == 0.0);
  CHECK(m.rhs == doctest::Approx(1.0));
}

TEST_CASE("Dirichlet energy of the asymmetric tent and of its flow") {
  const GridFunction u = tent(1200);
  const double h = u.spec().cell_width(0);
  const ScalarMap G = ScalarMap::power(2.0);
  CHECK(std::abs(dirichlet_energy(u, G) - 1.5) <= 2.0 * h);
  CHECK(std::abs(dirichlet_energy(steiner(u, Direction::along(0)), G) - fixtures::tent_energy(INFINITY)) <=
        4.0 * h);
  // total variation of a unit tent is 2.
  CHECK(std::abs(dirichlet_energy(u, ScalarMap::identity()) - 2.0) <= h);
}

TEST_CASE("energy never increases along the flow") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    const auto f = fixtures::random_bumps(rng);
    const auto g = fixtures::random_bumps(rng);
    const GridFunction u = fixtures::sample(2, 96, 1.0, [&f](const Point& x) { return f(x); });
    const GridFunction v = fixtures::sample(2, 96, 1.0, [&g](const Point& x) { return g(x); });
    for (double t : {0.1, 1.0}) {
      for (double p : {1.5, 2.0, 4.0}) {
        const InequalityMargin m = polya_szego_check(u, FlowTime(t), Direction::along(i % 2), ScalarMap::power(p));
        CHECK(m.margin >= -1e-12 * (1.0 + m.rhs));
      }
      CHECK(nonexpansivity_check(u, v, FlowTime(t), Direction::along(0), 1.0).margin >= -1e-12);
      CHECK(cavalieri_check(u, FlowTime(t), Direction::along(1), ScalarMap::power(3.0)).violation() <= 1e-14);
    }
  }
}

TEST_CASE("non-convex G is rejected") {
  const GridFunction u = tent(200);
  const ScalarMap concave = ScalarMap::power(0.5);
  CHECK_THROWS_AS(polya_szego_check(u, FlowTime(1.0), Direction::along(0), concave), std::invalid_argument);
  CHECK_FALSE(dirichlet_energy_checked(u, concave).admissible);
  CHECK(dirichlet_energy_checked(u, ScalarMap::power(2.0)).admissible);
  CHECK_FALSE(dirichlet_energy_checked(u, ScalarMap::affine(1.0, 1.0)).admissible);
}

TEST_CASE("cell gradients use one-sided differences at the support edge") {
  const GridFunction u(cube_grid(1, 6, 3.0), {0, 0, 1, 3, 0, 0});
  const std::vector<Point> g = cell_gradients(u);
  CHECK(g[0][0] == 0.0);
  CHECK(g[1][0] == 0.0);
  CHECK(g[2][0] == doctest::Approx(2.0));  // toward the positive neighbour
  CHECK(g[3][0] == doctest::Approx(2.0));
  CHECK(g[4][0] == 0.0);
}

TEST_CASE("weighted functional needs a declared weight") {
  const GridFunction u = fixtures::sample(1, 800, 4.0, [](const Point& x) {
    return std::max(1.0 - std::abs(x[0] - 1.0), 0.0);
  });
  WeightedIntegrand bare;
  bare.F = [](const Point&, double v) { return v; };
  CHECK_THROWS_AS(weighted_functional(u, bare), std::invalid_argument);
  CHECK_THROWS_AS(WeightedIntegrand::axis_weight(ScalarMap::identity(), 0, 2.0), std::invalid_argument);

  const WeightedIntegrand w =
      WeightedIntegrand::axis_weight(ScalarMap("exp(-z)", [](double z) { return std::exp(-z); }), 0, 4.0);
  // int_0^2 e^-x (1 - |x - 1|) dx = (1 - 1/e)^2
  const double exact = (1.0 - std::exp(-1.0)) * (1.0 - std::exp(-1.0));
  CHECK(weighted_functional(u, w) == doctest::Approx(exact).epsilon(1e-4));
  const InequalityMargin m = weighted_check(u, FlowTime::infinity(), Direction::along(0), w);
  // centred: 2 int_0^1 e^-x (1 - x) dx = 2/e
  CHECK(m.lhs == doctest::Approx(exact).epsilon(1e-4));
  CHECK(m.rhs == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-4));
}

TEST_CASE("boundary layer of the torsion function grows like 4 pi s") {
  const GridFunction u = fixtures::sample(2, 512, 1.05, fixtures::torsion);
  const double cell = u.spec().cell_volume();
  for (double s : {0.005, 0.01}) {
    const double exact = 4.0 * std::numbers::pi * s;
    CHECK(std::abs(boundary_layer_measure(u, s) - exact) <= 0.03 * exact + 8.0 * cell);
  }
  double support = 0.0;
  for (double v : u.values()) support += v > 0.0 ? cell : 0.0;
  CHECK(boundary_layer_measure(u, 1.0) == doctest::Approx(support));
  CHECK_THROWS_AS(boundary_layer_measure(u, 0.0), std::invalid_argument);
}

TEST_CASE("scalar maps and their sampled checks") {
  CHECK(ScalarMap::power(2.0)(3.0) == 9.0);
  CHECK(ScalarMap::power(2.0)(-1.0) == 0.0);
  CHECK(ScalarMap::truncation(1.0)(5.0) == 1.0);
  const ScalarMap tab = ScalarMap::table({0.0, 1.0, 2.0}, {0.0, 2.0, 3.0});
  CHECK(tab(0.5) == doctest::Approx(1.0));
  CHECK(tab(5.0) == 3.0);
  CHECK_THROWS_AS(ScalarMap::table({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK(midpoint_convexity_defect(ScalarMap::power(2.0), 0.0, 2.0) == 0.0);
  CHECK(midpoint_convexity_defect(ScalarMap::power(0.5), 0.0, 2.0) > 0.0);
  CHECK(monotonicity_defect(ScalarMap::affine(0.0, -1.0), 0.0, 1.0) > 0.0);
  CHECK(monotonicity_defect(ScalarMap::identity(), 0.0, 1.0) == 0.0);
}

TEST_CASE("equation data: primitive, h and hypotheses") {
  const EquationSpec eq = p_laplace_torsion(3.0, 1.0, 1.0);
  // g(z) = z^2, G = z^3/3, h = G - z g = -2 z^3 / 3.
  CHECK(eq.primitive(2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-10));
  CHECK(eq.h(1.5) == doctest::Approx(-2.0 * 3.375 / 3.0).epsilon(1e-10));
  CHECK(eq.check_hypotheses(5.0, 5.0).ok());
  CHECK(eq.monotone_operator_minimum(2, 2000, 1) >= 0.0);
  CHECK(eq.symmetry_cases(5.0, 5.0).nonnegative_source);

  const EquationSpec bad(ScalarMap::affine(1.0, -1.0), SourceMap::constant(1.0), ScalarMap::constant(1.0), 10.0);
  CHECK_FALSE(bad.check_hypotheses(1.0, 1.0).ok());

  const EquationSpec decreasing(ScalarMap::identity(),
                                SourceMap("2 - r", [](double r, double) { return 2.0 - r; }),
                                ScalarMap::constant(1.0));
  const SymmetryCases cases = decreasing.symmetry_cases(4.0, 1.0);
  CHECK(cases.strictly_decreasing_in_r);
  CHECK_FALSE(cases.nonnegative_source);
  CHECK_FALSE(cases.autonomous_nonincreasing);
}
