#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "csym/grid_function.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace csym;

namespace {

GridFunction tent_1d(std::size_t n = 400, double half = 2.5) {
  return fixtures::sample(1, n, half, fixtures::shifted_tent);
}

double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.spec().size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

std::vector<fixtures::BumpSum> suite(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<fixtures::BumpSum> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(fixtures::random_bumps(rng));
  return out;
}

GridFunction on_grid(const fixtures::BumpSum& f, std::size_t n = 64) {
  return fixtures::sample(2, n, 1.0, [&f](const Point& x) { return f(x); });
}

}  // namespace

TEST_CASE("grid specs and functions validate their invariants") {
  GridSpec bad;
  bad.dims = 1;
  bad.bbox = {{0.0, 1.0}};
  bad.shape = {2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.shape = {4};
  bad.bbox = {{1.0, 1.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const GridSpec spec = cube_grid(1, 4, 1.0);
  CHECK_THROWS_AS(GridFunction(spec, {0, 1, -1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(spec, {1, 1, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(spec, {0, 1, 1}), std::invalid_argument);
  CHECK_NOTHROW(GridFunction(spec, {0, 1, 2, 0}));
}

TEST_CASE("superlevel fibres of a tent") {
  const GridFunction u = fixtures::sample(1, 400, 2.5, [](const Point& x) {
    return std::max(1.0 - std::abs(x[0]), 0.0);
  });
  const double h = u.spec().cell_width(0);
  const FiberSets f = superlevel_fibers(u, 0.5, Direction::along(0));
  REQUIRE(f.sets.size() == 1);
  REQUIRE(f.sets[0].size() == 1);
  CHECK(std::abs(f.sets[0][0].left + 0.5) <= h);
  CHECK(std::abs(f.sets[0][0].right - 0.5) <= h);
  CHECK(superlevel_fibers(u, 2.0, Direction::along(0)).sets[0].empty());
  CHECK_THROWS_AS(superlevel_fibers(u, 0.0, Direction::along(0)), std::invalid_argument);
}

TEST_CASE("superlevel fibres of a rectangle indicator") {
  const GridFunction u = fixtures::sample(2, 40, 2.0, [](const Point& x) {
    return (x[0] > 0.2 && x[0] < 1.2 && std::abs(x[1]) < 0.5) ? 1.0 : 0.0;
  });
  const FiberSets f = superlevel_fibers(u, 0.5, Direction::along(0));
  CHECK(f.sets.size() == 40);
  std::size_t nonempty = 0;
  for (const IntervalSet& s : f.sets) {
    if (s.empty()) continue;
    ++nonempty;
    REQUIRE(s.size() == 1);
    CHECK(s[0].left == doctest::Approx(0.2));
    CHECK(s[0].right == doctest::Approx(1.2));
  }
  CHECK(nonempty == 10);
}

TEST_CASE("t = 0 returns the input exactly") {
  for (const auto& f : suite(10, 1)) {
    const GridFunction u = on_grid(f);
    CHECK(max_diff(csts(u, FlowTime(0.0), Direction::along(0)), u) == 0.0);
    CHECK(max_diff(csts(u, FlowTime(0.0), Direction::along(1)), u) == 0.0);
  }
}

TEST_CASE("infinite time equals Steiner symmetrization") {
  for (const auto& f : suite(10, 2)) {
    const GridFunction u = on_grid(f);
    for (std::size_t axis : {0, 1}) {
      const Direction d = Direction::along(axis);
      CHECK(max_diff(csts(u, FlowTime::infinity(), d), steiner(u, d)) == 0.0);
    }
  }
}

TEST_CASE("a staircase symmetrizes to nested centred steps") {
  // value 1 on (0, 1), 2 on (1, 2), cell width 1/4 aligned with 0.
  const GridFunction u = fixtures::sample(1, 32, 4.0, [](const Point& x) {
    if (x[0] > 0.0 && x[0] < 1.0) return 1.0;
    if (x[0] > 1.0 && x[0] < 2.0) return 2.0;
    return 0.0;
  });
  const GridFunction star = steiner(u, Direction::along(0));
  for (std::size_t i = 0; i < 32; ++i) {
    const double x = star.spec().cell_center(0, i);
    const double expected = std::abs(x) < 0.5 ? 2.0 : (std::abs(x) < 1.0 ? 1.0 : 0.0);
    CHECK(star.at_index({i, 0, 0}) == expected);
  }
}

TEST_CASE("an off-centre tent moves its peak to 0.5 e^-t") {
  const GridFunction u = tent_1d();
  const double h = u.spec().cell_width(0);
  for (double t : {0.1, 0.5, 1.0, 3.0}) {
    const GridFunction ut = csts(u, FlowTime(t), Direction::along(0));
    const double c = 0.5 * std::exp(-t);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.spec().shape[0]; ++i) {
      const double x = u.spec().cell_center(0, i);
      worst = std::max(worst, std::abs(ut.at_index({i, 0, 0}) - std::max(1.0 - std::abs(x - c), 0.0)));
    }
    CHECK(worst <= 2.0 * h);
  }
}

TEST_CASE("symmetrized support must stay inside the grid") {
  GridSpec spec;
  spec.dims = 1;
  spec.bbox = {{-0.2, 3.0}};
  spec.shape = {64};
  const GridFunction u = GridFunction::sample(spec, [](const Point& x) {
    return (x[0] > 1.0 && x[0] < 2.5) ? 1.0 : 0.0;
  });
  CHECK_THROWS_AS(steiner(u, Direction::along(0)), std::domain_error);
}

TEST_CASE("explicit level lists are validated") {
  CHECK_THROWS_AS(LevelGrid::explicit_levels({}), std::invalid_argument);
  CHECK_THROWS_AS(LevelGrid::explicit_levels({0.5, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(LevelGrid::explicit_levels({0.0, 0.2}), std::invalid_argument);
  const LevelGrid lg = LevelGrid::explicit_levels({0.25, 0.5, 0.75, 1.0});
  const GridFunction u = tent_1d(200);
  const GridFunction ut = csts(u, FlowTime(1.0), Direction::along(0), lg);
  for (double v : ut.values()) {
    CHECK((v == 0.0 || v == 0.25 || v == 0.5 || v == 0.75 || v == 1.0));
  }
}

TEST_CASE("level sets keep their cell counts") {
  for (const auto& f : suite(20, 3)) {
    const GridFunction u = on_grid(f);
    for (double t : {0.05, 0.7, 4.0}) {
      const GridFunction ut = csts(u, FlowTime(t), Direction::along(1));
      for (double v : u.values()) {
        if (v > 0.0) CHECK(ut.count_at_least(v) == u.count_at_least(v));
      }
    }
  }
}

TEST_CASE("order is preserved") {
  for (const auto& f : suite(20, 4)) {
    const GridFunction v = on_grid(f);
    const GridFunction u = fixtures::sample(2, 64, 1.0, [&f](const Point& x) { return 0.6 * f(x); });
    for (double t : {0.2, 1.5}) {
      const GridFunction ut = csts(u, FlowTime(t), Direction::along(0));
      const GridFunction vt = csts(v, FlowTime(t), Direction::along(0));
      for (std::size_t k = 0; k < u.spec().size(); ++k) CHECK(ut[k] <= vt[k]);
    }
  }
}

TEST_CASE("cutoff and monotone maps commute with the flow") {
  for (const auto& f : suite(10, 5)) {
    const GridFunction u = on_grid(f);
    const Direction d = Direction::along(0);
    const FlowTime t(0.4);
    const double eps = 0.3 * u.max_value();
    CHECK(max_diff(csts(cutoff(u, eps), t, d), cutoff(csts(u, t, d), eps)) == 0.0);
    const ScalarMap psi = ScalarMap::power(3.0);
    CHECK(max_diff(csts(monotone_compose(u, psi), t, d), monotone_compose(csts(u, t, d), psi)) <= 1e-15);
  }
}

TEST_CASE("cutoff and monotone_compose examples") {
  const GridFunction u(cube_grid(1, 5, 1.0), {0, 1, 3, 2, 0});
  const GridFunction c = cutoff(u, 1.5);
  CHECK(std::vector<double>(c.values().begin(), c.values().end()) == std::vector<double>{0, 0, 1.5, 0.5, 0});
  CHECK_THROWS_AS(cutoff(u, -1.0), std::invalid_argument);
  const GridFunction sq = monotone_compose(u, ScalarMap::power(2.0));
  CHECK(std::vector<double>(sq.values().begin(), sq.values().end()) == std::vector<double>{0, 1, 9, 4, 0});
  CHECK_THROWS_AS(monotone_compose(u, ScalarMap::affine(1.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(monotone_compose(u, ScalarMap::affine(0.0, -1.0)), std::invalid_argument);
}

TEST_CASE("Lipschitz constant, displacement and support are controlled") {
  for (const auto& f : suite(20, 6)) {
    const GridFunction u = on_grid(f);
    const double lip = u.lipschitz_estimate();
    const double h = u.spec().max_cell_width();
    const double radius = u.support_radius() + h;
    for (double t : {0.05, 0.5, 2.0}) {
      const GridFunction ut = csts(u, FlowTime(t), Direction::along(0));
      CHECK(ut.lipschitz_estimate() <= lip * (1.0 + 1e-12) + 1e-12);
      CHECK(max_diff(ut, u) <= lip * radius * t + 2.0 * lip * h);
      CHECK(ut.support_radius() <= radius);
    }
  }
}

TEST_CASE("rotated directions round-trip and leave radial functions fixed") {
  const GridFunction u = fixtures::sample(2, 128, 1.05, fixtures::paraboloid);
  const double h = u.spec().max_cell_width();
  for (double angle : {0.3, 1.0, 2.2}) {
    const Direction d = Direction::from_angle(angle);
    // the kink at the support edge limits the interpolant to first order.
    CHECK(rotation_roundtrip_error(u, d) <= u.lipschitz_estimate() * h);
    const GridFunction ut = csts(u, FlowTime(0.5), d);
    CHECK(max_diff(ut, u) <= 4.0 * h);
    const Point w = d.world_vector(2);
    CHECK(w[0] == doctest::Approx(std::cos(angle)));
    CHECK(w[1] == doctest::Approx(std::sin(angle)));
  }
  Matrix skew{};
  skew[0] = {1.0, 0.1, 0.0};
  skew[1] = {0.0, 1.0, 0.0};
  CHECK_THROWS_AS(Direction::rotated(0, skew, 2), std::invalid_argument);
}

TEST_CASE("3-D fibres along each axis") {
  const GridFunction u = fixtures::sample(3, 24, 1.2, [](const Point& x) {
    return std::max(0.5 - std::hypot(x[0] - 0.3, x[1], x[2]), 0.0);
  });
  for (std::size_t axis : {0, 1, 2}) {
    const GridFunction ut = csts(u, FlowTime(1.0), Direction::along(axis));
    for (double v : {0.1, 0.3}) CHECK(ut.count_at_least(v) == u.count_at_least(v));
  }
  // shifted along x only, so y and z leave it alone.
  CHECK(max_diff(steiner(u, Direction::along(1)), u) <= 1e-15);
}

TEST_CASE("refine interpolates between cell centres") {
  const GridFunction u = tent_1d(100);
  const GridFunction fine = refine(u, 2);
  CHECK(fine.spec().shape[0] == 200);
  CHECK(fine.max_value() <= u.max_value());
  CHECK(std::abs(fine.at({0.5, 0, 0}) - u.at({0.5, 0, 0})) <= 2.0 * u.spec().cell_width(0));
}
