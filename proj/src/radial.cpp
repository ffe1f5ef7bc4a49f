#include "csym/radial.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace csym {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

struct State {
  double u;
  double flux;
};

constexpr std::uintmax_t kMaxRootIterations = 200;

// Integrates (u, flux) in rho, r = r0 + rho^2. Substituting rho removes the
// r^{1/(p-1)} behaviour of u' at the start point, so RK4 keeps its order.
class FluxMarch {
 public:
  FluxMarch(const EquationSpec& spec, std::size_t dims, double r0)
      : spec_(spec), dims_(dims), r0_(r0) {}

  double radius(double rho) const { return r0_ + rho * rho; }

  double slope_magnitude(double rho, double flux) const {
    const double r = radius(rho);
    const double area = dims_ == 1 ? 1.0 : std::pow(r, static_cast<double>(dims_ - 1));
    if (!(area > 0.0)) return 0.0;
    return g_inverse(spec_, std::max(flux / area, 0.0));
  }

  State rhs(double rho, const State& y) const {
    const double r = radius(rho);
    const double dr = 2.0 * rho;
    const double area = dims_ == 1 ? 1.0 : std::pow(r, static_cast<double>(dims_ - 1));
    return {-dr * slope_magnitude(rho, y.flux), dr * area * spec_.f()(r, y.u)};
  }

  State step(double rho, const State& y, double d) const {
    const State k1 = rhs(rho, y);
    const State k2 = rhs(rho + 0.5 * d, {y.u + 0.5 * d * k1.u, y.flux + 0.5 * d * k1.flux});
    const State k3 = rhs(rho + 0.5 * d, {y.u + 0.5 * d * k2.u, y.flux + 0.5 * d * k2.flux});
    const State k4 = rhs(rho + d, {y.u + d * k3.u, y.flux + d * k3.flux});
    return {y.u + d / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            y.flux + d / 6.0 * (k1.flux + 2.0 * k2.flux + 2.0 * k3.flux + k4.flux)};
  }

 private:
  const EquationSpec& spec_;
  std::size_t dims_;
  double r0_;
};

struct MarchResult {
  std::vector<double> rho;
  std::vector<State> states;
  bool crossed = false;
  double rho_end = 0.0;  // where u reaches 0
  State end{};
  bool any_flux = false;
};

MarchResult march(const FluxMarch& m, double u0, double d_rho, std::size_t max_steps) {
  MarchResult res;
  res.rho.push_back(0.0);
  res.states.push_back({u0, 0.0});
  for (std::size_t i = 0; i < max_steps; ++i) {
    const double rho = res.rho.back();
    const State y = res.states.back();
    const State next = m.step(rho, y, d_rho);
    if (next.flux < 0.0) {
      const double where = m.radius(rho + d_rho);
      std::ostringstream os;
      os << "flux turned negative at r = " << where;
      throw RadialSolveError(RadialSolveError::Kind::negative_flux, where, os.str());
    }
    if (next.flux != 0.0) res.any_flux = true;
    if (next.u <= 0.0) {
      // u crosses zero inside this step: find the partial step length.
      auto along = [&](double d) { return m.step(rho, y, d).u; };
      double lo = 0.0;
      double hi = d_rho;
      if (next.u < 0.0) {
        std::uintmax_t iters = kMaxRootIterations;
        const auto bracket = boost::math::tools::toms748_solve(
            along, lo, hi, y.u, next.u, boost::math::tools::eps_tolerance<double>(52), iters);
        lo = bracket.first;
        hi = bracket.second;
      }
      const double d = next.u < 0.0 ? 0.5 * (lo + hi) : d_rho;
      res.crossed = true;
      res.rho_end = rho + d;
      res.end = m.step(rho, y, d);
      res.end.u = 0.0;
      return res;
    }
    res.rho.push_back(rho + d_rho);
    res.states.push_back(next);
  }
  return res;
}

}  // namespace

HypothesisViolation::HypothesisViolation(HypothesisReport report)
    : std::runtime_error("equation data violate the hypotheses: " + join(report.violations)),
      report_(std::move(report)) {}

double g_inverse(const EquationSpec& spec, double y) {
  if (!(y >= 0.0)) throw std::domain_error("g_inverse needs y >= 0");
  if (y == 0.0) return 0.0;
  const auto& g = spec.g();
  double lo = 0.0;
  double hi = std::min(1.0, spec.z_max());
  while (g(hi) < y) {
    if (hi >= spec.z_max()) throw std::domain_error("g_inverse: y above the range of g on [0, z_max]");
    lo = hi;
    hi = std::min(2.0 * hi, spec.z_max());
  }
  const double g_hi = g(hi);
  if (g_hi == y) return hi;
  const double g_lo = g(lo);
  if (g_lo == y) return lo;
  std::uintmax_t iters = kMaxRootIterations;
  const auto bracket = boost::math::tools::toms748_solve(
      [&](double z) { return g(z) - y; }, lo, hi, g_lo - y, g_hi - y,
      boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (bracket.first + bracket.second);
}

double RadialProfile::value_at(double radius) const {
  if (radius <= inner_radius) return u0;
  if (radius >= outer_radius || rho.size() < 2) return 0.0;
  const double s = std::sqrt(radius - inner_radius);
  const auto it = std::upper_bound(rho.begin(), rho.end(), s);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - rho.begin()), rho.size() - 1) - 1;
  const double h = rho[k + 1] - rho[k];
  const double t = (s - rho[k]) / h;
  const double d0 = 2.0 * rho[k] * du[k] * h;
  const double d1 = 2.0 * rho[k + 1] * du[k + 1] * h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u[k] + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * u[k + 1] +
         (t3 - t2) * d1;
}

double RadialProfile::slope_at(double radius) const {
  if (radius <= inner_radius || radius >= outer_radius || rho.size() < 2) return 0.0;
  const double s = std::sqrt(radius - inner_radius);
  const auto it = std::upper_bound(rho.begin(), rho.end(), s);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - rho.begin()), rho.size() - 1) - 1;
  const double t = (s - rho[k]) / (rho[k + 1] - rho[k]);
  return (1.0 - t) * du[k] + t * du[k + 1];
}

RadialProfile solve_radial(const EquationSpec& spec, std::size_t dims, double u0,
                           const RadialOptions& options) {
  if (dims < 1 || dims > 3) throw std::invalid_argument("radial solver supports N = 1, 2, 3");
  if (!(u0 > 0.0)) throw std::invalid_argument("u0 must be > 0");
  if (options.steps < 4) throw std::invalid_argument("radial solver needs at least 4 steps");
  if (!(options.inner_radius >= 0.0) || !(options.r_max > options.inner_radius)) {
    throw std::invalid_argument("radial solver needs 0 <= r0 < r_max");
  }
  const double r0 = options.inner_radius;
  const FluxMarch m(spec, dims, r0);

  // Coarse pass over [r0, r_max] to locate R, then the real march.
  const double rho_max = std::sqrt(options.r_max - r0);
  const MarchResult coarse = march(m, u0, rho_max / static_cast<double>(options.steps), options.steps);
  if (!coarse.crossed) {
    if (!coarse.any_flux) {
      throw RadialSolveError(RadialSolveError::Kind::zero_flux, options.r_max,
                             "flux identically zero: u stays at u0 and never reaches 0");
    }
    std::ostringstream os;
    os << "u never reaches 0 within r_max = " << options.r_max;
    throw RadialSolveError(RadialSolveError::Kind::no_boundary, options.r_max, os.str());
  }
  const MarchResult fine =
      march(m, u0, coarse.rho_end / static_cast<double>(options.steps), 2 * options.steps + 8);
  if (!fine.crossed) {
    throw RadialSolveError(RadialSolveError::Kind::no_boundary, m.radius(fine.rho.back()),
                           "refined march did not reach u = 0");
  }

  RadialProfile p;
  p.dims = dims;
  p.u0 = u0;
  p.inner_radius = r0;
  const std::size_t n = fine.rho.size();
  p.rho.reserve(n + 1);
  p.r.reserve(n + 1);
  p.u.reserve(n + 1);
  p.du.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    p.rho.push_back(fine.rho[i]);
    p.r.push_back(m.radius(fine.rho[i]));
    p.u.push_back(fine.states[i].u);
    p.du.push_back(-m.slope_magnitude(fine.rho[i], fine.states[i].flux));
  }
  // Drop a node that coincides with the crossing.
  if (fine.rho_end <= p.rho.back()) {
    p.rho.pop_back();
    p.r.pop_back();
    p.u.pop_back();
    p.du.pop_back();
  }
  p.outer_radius = m.radius(fine.rho_end);
  p.boundary_slope = m.slope_magnitude(fine.rho_end, fine.end.flux);
  p.rho.push_back(fine.rho_end);
  p.r.push_back(p.outer_radius);
  p.u.push_back(0.0);
  p.du.push_back(-p.boundary_slope);
  return p;
}

double overdetermined_residual(const RadialProfile& profile, const EquationSpec& spec) {
  return profile.boundary_slope - spec.lambda()(profile.outer_radius);
}

ShootResult shoot_for_boundary(const EquationSpec& spec, std::size_t dims,
                               const RadialOptions& options, const ShootOptions& shoot) {
  HypothesisReport report = spec.check_hypotheses(shoot.hypothesis_radius, shoot.u0_max);
  if (!report.ok()) throw HypothesisViolation(std::move(report));
  if (!(shoot.u0_min > 0.0) || !(shoot.u0_max > shoot.u0_min) || shoot.scan_points < 2) {
    throw std::invalid_argument("shooting bracket must satisfy 0 < u0_min < u0_max");
  }

  auto residual_at = [&](double u0) {
    return overdetermined_residual(solve_radial(spec, dims, u0, options), spec);
  };

  std::vector<double> u0s;
  std::vector<double> res;
  std::optional<RadialSolveError> zero_flux;
  const double ratio = std::log(shoot.u0_max / shoot.u0_min) / static_cast<double>(shoot.scan_points - 1);
  for (std::size_t i = 0; i < shoot.scan_points; ++i) {
    const double u0 = shoot.u0_min * std::exp(ratio * static_cast<double>(i));
    try {
      res.push_back(residual_at(u0));
      u0s.push_back(u0);
    } catch (const RadialSolveError& e) {
      // Outside the solvable range for this u0; the scan simply skips it.
      if (e.kind() == RadialSolveError::Kind::zero_flux && !zero_flux) zero_flux = e;
    } catch (const std::domain_error&) {
    }
  }

  if (res.empty() && zero_flux) throw *zero_flux;

  ShootResult out;
  for (std::size_t i = 0; i + 2 < res.size(); ++i) {
    if ((res[i + 1] - res[i]) * (res[i + 2] - res[i + 1]) < 0.0) out.monotone = false;
  }
  for (std::size_t i = 0; i + 1 < res.size(); ++i) {
    if (res[i] == 0.0) {
      out.roots.push_back(u0s[i]);
      continue;
    }
    if (res[i] * res[i + 1] >= 0.0) continue;
    std::uintmax_t iters = kMaxRootIterations;
    const auto bracket = boost::math::tools::toms748_solve(
        residual_at, u0s[i], u0s[i + 1], res[i], res[i + 1],
        boost::math::tools::eps_tolerance<double>(50), iters);
    out.roots.push_back(0.5 * (bracket.first + bracket.second));
  }
  if (!res.empty() && res.back() == 0.0) out.roots.push_back(u0s.back());
  if (out.roots.empty()) {
    throw std::runtime_error("shooting found no sign change of the boundary residual in the u0 bracket");
  }
  out.profile = solve_radial(spec, dims, out.roots.front(), options);
  out.residual = overdetermined_residual(out.profile, spec);
  return out;
}

GridFunction rasterize(const RadialProfile& profile, const Point& center, const GridSpec& spec) {
  spec.validate();
  if (spec.dims != profile.dims) throw std::invalid_argument("profile and grid dimensions differ");
  for (std::size_t a = 0; a < spec.dims; ++a) {
    const double h = spec.cell_width(a);
    if (center[a] - profile.outer_radius < spec.bbox[a].first + h ||
        center[a] + profile.outer_radius > spec.bbox[a].second - h) {
      throw std::invalid_argument("ball exceeds the grid bounding box");
    }
  }
  return GridFunction::sample(spec, [&](const Point& x) {
    double d2 = 0.0;
    for (std::size_t a = 0; a < spec.dims; ++a) d2 += (x[a] - center[a]) * (x[a] - center[a]);
    return std::max(profile.value_at(std::sqrt(d2)), 0.0);
  });
}

double unit_sphere_area(std::size_t dims) {
  const double n = static_cast<double>(dims);
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace csym
