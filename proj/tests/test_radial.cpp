#include <cmath>
#include <numbers>
#include <stdexcept>

#include "csym/radial.hpp"
#include "doctest.h"

using namespace csym;

namespace {

// u0 - c r^q with q = p/(p-1), c = (p-1)/p N^{-1/(p-1)}: the radial solution
// of the p-Laplace torsion problem with unit source.
struct Closed {
  double p, n, u0;
  double q() const { return p / (p - 1.0); }
  double c() const { return (p - 1.0) / p * std::pow(n, -1.0 / (p - 1.0)); }
  double radius() const { return std::pow(u0 / c(), 1.0 / q()); }
  double u(double r) const { return u0 - c() * std::pow(r, q()); }
  double slope(double r) const { return std::pow(r / n, 1.0 / (p - 1.0)); }
};

}  // namespace

TEST_CASE("g inverse") {
  const EquationSpec eq = p_laplace_torsion(3.0, 1.0, 1.0);
  CHECK(g_inverse(eq, 4.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g_inverse(eq, 0.0) == 0.0);
  CHECK_THROWS_AS(g_inverse(eq, 1e7), std::domain_error);

  const EquationSpec tab(ScalarMap::table({0.0, 1.0, 3.0}, {0.0, 2.0, 3.0}), SourceMap::constant(1.0),
                         ScalarMap::constant(1.0), 3.0);
  for (double z : {0.25, 0.9, 1.7, 2.6}) CHECK(g_inverse(tab, tab.g()(z)) == doctest::Approx(z).epsilon(1e-10));
}

TEST_CASE("radial solutions match the closed form") {
  for (double p : {2.0, 3.0}) {
    for (std::size_t dims : {2, 3}) {
      const Closed exact{p, static_cast<double>(dims), 0.7};
      const RadialProfile prof = solve_radial(p_laplace_torsion(p, 1.0, 1.0), dims, exact.u0);
      CHECK(prof.outer_radius == doctest::Approx(exact.radius()).epsilon(1e-9));
      CHECK(prof.boundary_slope == doctest::Approx(exact.slope(exact.radius())).epsilon(1e-8));
      for (double f : {0.1, 0.5, 0.9}) {
        const double r = f * exact.radius();
        CHECK(std::abs(prof.value_at(r) - exact.u(r)) <= 1e-7);
        CHECK(std::abs(prof.slope_at(r) + exact.slope(r)) <= 1e-6);
      }
      CHECK(prof.value_at(2.0 * exact.radius()) == 0.0);
    }
  }
}

TEST_CASE("profiles are nonincreasing and satisfy the flux identity") {
  const EquationSpec eq = p_laplace_torsion(2.5, 2.0, 1.0);
  const RadialProfile prof = solve_radial(eq, 3, 1.0);
  for (std::size_t i = 0; i < prof.du.size(); ++i) CHECK(prof.du[i] <= 0.0);
  for (std::size_t i = 1; i < prof.u.size(); ++i) CHECK(prof.u[i] <= prof.u[i - 1]);
  // R^{N-1} g(|u'(R)|) = int_0^R s^{N-1} f = 2 R^N / N
  const double R = prof.outer_radius;
  const double g = std::pow(prof.boundary_slope, 1.5);
  CHECK(R * R * g == doctest::Approx(2.0 * R * R * R / 3.0).epsilon(1e-8));
}

TEST_CASE("overdetermined residual examples") {
  const RadialProfile prof = solve_radial(p_laplace_torsion(2.0, 1.0, 0.5), 2, 0.25);
  CHECK(prof.outer_radius == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(overdetermined_residual(prof, p_laplace_torsion(2.0, 1.0, 0.5))) <= 1e-9);
  CHECK(overdetermined_residual(prof, p_laplace_torsion(2.0, 1.0, 1.0)) == doctest::Approx(-0.5).epsilon(1e-9));
  const EquationSpec linear(ScalarMap::identity(), SourceMap::constant(1.0),
                            ScalarMap("r/2", [](double r) { return 0.5 * r; }));
  CHECK(std::abs(overdetermined_residual(prof, linear)) <= 1e-9);
}

TEST_CASE("shooting finds the matching ball") {
  const ShootResult a = shoot_for_boundary(p_laplace_torsion(2.0, 1.0, 0.5), 2);
  CHECK(a.profile.u0 == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(a.profile.outer_radius == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(a.residual) <= 1e-9);
  CHECK(a.roots.size() == 1);
  const ShootResult b = shoot_for_boundary(p_laplace_torsion(2.0, 1.0, 1.0), 2);
  CHECK(b.profile.u0 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b.profile.outer_radius == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("shooting rejects data that fail the hypotheses") {
  const EquationSpec rising_source(ScalarMap::identity(), SourceMap("-1", [](double, double) { return -1.0; }),
                                   ScalarMap::constant(1.0));
  CHECK_THROWS(shoot_for_boundary(rising_source, 2));
  const EquationSpec negative_lambda(ScalarMap::identity(), SourceMap::constant(1.0), ScalarMap::constant(-1.0));
  CHECK_THROWS_AS(shoot_for_boundary(negative_lambda, 2), HypothesisViolation);
}

TEST_CASE("a vanishing source never reaches zero") {
  const EquationSpec eq = p_laplace_torsion(2.0, 0.0, 1.0);
  try {
    solve_radial(eq, 2, 1.0);
    FAIL("expected a radial solve error");
  } catch (const RadialSolveError& e) {
    CHECK(e.kind() == RadialSolveError::Kind::zero_flux);
  }
}

TEST_CASE("annular start keeps u constant inside the hole") {
  RadialOptions opt;
  opt.inner_radius = 0.3;
  const RadialProfile prof = solve_radial(p_laplace_torsion(2.0, 1.0, 1.0), 2, 0.5, opt);
  CHECK(prof.inner_radius == 0.3);
  CHECK(prof.value_at(0.1) == 0.5);
  CHECK(prof.value_at(0.3) == doctest::Approx(0.5));
  CHECK(prof.outer_radius > 0.3);
  // with the flux from 0.3: r u' = -(r^2 - 0.09)/2, u = 0.5 - (r^2 - 0.3^2)/4 + 0.09/2 ln(r/0.3)
  const double r = 0.8;
  const double exact = 0.5 - (r * r - 0.09) / 4.0 + 0.045 * std::log(r / 0.3);
  CHECK(prof.value_at(r) == doctest::Approx(exact).epsilon(1e-7));
}

TEST_CASE("rasterize places the ball and refuses oversized ones") {
  const RadialProfile prof = solve_radial(p_laplace_torsion(2.0, 1.0, 0.5), 2, 0.25);
  const GridFunction u = rasterize(prof, {0.0, 0.0, 0.0}, cube_grid(2, 64, 1.2));
  CHECK(u.max_value() == doctest::Approx(0.25).epsilon(1e-3));
  CHECK_THROWS_AS(rasterize(prof, {0.0, 0.0, 0.0}, cube_grid(2, 64, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(rasterize(prof, {0.5, 0.0, 0.0}, cube_grid(2, 64, 1.2)), std::invalid_argument);
}

TEST_CASE("unit sphere areas") {
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
}
