#include "csym/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csym/kernels.hpp"

namespace csym {

namespace {

void require_same_grid(const GridFunction& u, const GridFunction& v) {
  if (!(u.spec() == v.spec())) throw std::invalid_argument("functions live on different grids");
}

double top_of_gradient_range(const std::vector<double>& grad) {
  return grad.empty() ? 0.0 : *std::max_element(grad.begin(), grad.end());
}

}  // namespace

double lp_distance(const GridFunction& u, const GridFunction& v, double p) {
  require_same_grid(u, v);
  if (!(p >= 1.0)) throw std::invalid_argument("L^p distance needs p >= 1");
  const double s = kernels::pow_diff_sum(u.values(), v.values(), p) * u.spec().cell_volume();
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

double cavalieri(const GridFunction& u, const ScalarMap& F) {
  std::vector<double> terms(u.values().size());
  std::transform(u.values().begin(), u.values().end(), terms.begin(),
                 [&F](double v) { return F(v); });
  return kernels::sum(terms) * u.spec().cell_volume();
}

double hardy_littlewood(const GridFunction& u, const GridFunction& v) {
  require_same_grid(u, v);
  return kernels::dot(u.values(), v.values()) * u.spec().cell_volume();
}

std::vector<Point> cell_gradients(const GridFunction& u) {
  const GridSpec& spec = u.spec();
  const auto strides = spec.strides();
  const auto vals = u.values();
  std::vector<Point> out(vals.size(), Point{0.0, 0.0, 0.0});
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] <= 0.0) continue;
    const Index idx = spec.unflat(k);
    for (std::size_t a = 0; a < spec.dims; ++a) {
      const double h = spec.cell_width(a);
      const double lo = idx[a] > 0 ? vals[k - strides[a]] : 0.0;
      const double hi = idx[a] + 1 < spec.shape[a] ? vals[k + strides[a]] : 0.0;
      double d = 0.0;
      if (lo > 0.0 && hi > 0.0) {
        d = (hi - lo) / (2.0 * h);
      } else if (hi > 0.0) {
        d = (hi - vals[k]) / h;
      } else if (lo > 0.0) {
        d = (vals[k] - lo) / h;
      }
      out[k][a] = d;
    }
  }
  return out;
}

std::vector<double> gradient_magnitudes(const GridFunction& u) {
  const std::vector<Point> grad = cell_gradients(u);
  std::vector<double> out(grad.size());
  std::transform(grad.begin(), grad.end(), out.begin(), [](const Point& g) {
    return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  });
  return out;
}

double dirichlet_energy(const GridFunction& u, const ScalarMap& G) {
  std::vector<double> terms = gradient_magnitudes(u);
  for (auto& z : terms) z = G(z);
  return kernels::sum(terms) * u.spec().cell_volume();
}

EnergyValue dirichlet_energy_checked(const GridFunction& u, const ScalarMap& G) {
  const std::vector<double> grad = gradient_magnitudes(u);
  const double top = std::max(top_of_gradient_range(grad), 1e-12);
  EnergyValue out;
  out.admissible = G(0.0) == 0.0 && midpoint_convexity_defect(G, 0.0, 2.0 * top, 65) == 0.0;
  std::vector<double> terms(grad.size());
  std::transform(grad.begin(), grad.end(), terms.begin(), [&G](double z) { return G(z); });
  out.value = kernels::sum(terms) * u.spec().cell_volume();
  return out;
}

WeightedIntegrand WeightedIntegrand::axis_weight(ScalarMap w, std::size_t axis, double extent) {
  if (monotonicity_defect(ScalarMap("-w", [&w](double z) { return -w(z); }), 0.0, extent) > 0.0) {
    throw std::invalid_argument("axis weight must be nonincreasing in |x_axis|");
  }
  WeightedIntegrand out;
  out.F = [w = std::move(w), axis](const Point& x, double v) { return w(std::abs(x[axis])) * v; };
  out.declared_even_nonincreasing = true;
  return out;
}

WeightedIntegrand WeightedIntegrand::radial_weight(ScalarMap w, double extent) {
  if (monotonicity_defect(ScalarMap("-w", [&w](double z) { return -w(z); }), 0.0, extent) > 0.0) {
    throw std::invalid_argument("radial weight must be nonincreasing in |x|");
  }
  WeightedIntegrand out;
  out.F = [w = std::move(w)](const Point& x, double v) {
    return w(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])) * v;
  };
  out.declared_even_nonincreasing = true;
  return out;
}

double weighted_functional(const GridFunction& u, const WeightedIntegrand& F) {
  if (!F.declared_even_nonincreasing || !F.F) {
    throw std::invalid_argument("weighted integrand lacks its even/nonincreasing declaration");
  }
  const GridSpec& spec = u.spec();
  const auto vals = u.values();
  std::vector<double> terms(vals.size(), 0.0);
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] != 0.0) terms[k] = F.F(spec.center_of(k), vals[k]);
  }
  return kernels::sum(terms) * spec.cell_volume();
}

double boundary_layer_measure(const GridFunction& u, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("boundary layer level must be > 0");
  const std::size_t positive = static_cast<std::size_t>(
      std::count_if(u.values().begin(), u.values().end(), [](double v) { return v > 0.0; }));
  // {0 < u <= s} = {u > 0} \ {u > s}
  const std::size_t above = static_cast<std::size_t>(
      std::count_if(u.values().begin(), u.values().end(), [s](double v) { return v > s; }));
  return static_cast<double>(positive - above) * u.spec().cell_volume();
}

namespace {

InequalityMargin ordered(double lhs, double rhs, const GridFunction& u, const Direction& d) {
  const std::size_t axis = d.axis;
  return {lhs, rhs, rhs - lhs, u.spec().cell_width(axis)};
}

}  // namespace

InequalityMargin nonexpansivity_check(const GridFunction& u, const GridFunction& v, FlowTime t,
                                      const Direction& d, double p) {
  const double after = lp_distance(csts(u, t, d), csts(v, t, d), p);
  return ordered(after, lp_distance(u, v, p), u, d);
}

InequalityMargin cavalieri_check(const GridFunction& u, FlowTime t, const Direction& d,
                                 const ScalarMap& F) {
  const double before = cavalieri(u, F);
  const double after = cavalieri(csts(u, t, d), F);
  return {after, before, -std::abs(after - before), u.spec().cell_width(d.axis)};
}

InequalityMargin hardy_littlewood_check(const GridFunction& u, const GridFunction& v, FlowTime t,
                                        const Direction& d) {
  return ordered(hardy_littlewood(u, v), hardy_littlewood(csts(u, t, d), csts(v, t, d)), u, d);
}

InequalityMargin polya_szego_check(const GridFunction& u, FlowTime t, const Direction& d,
                                   const ScalarMap& G) {
  const EnergyValue before = dirichlet_energy_checked(u, G);
  if (!before.admissible) {
    throw std::invalid_argument("energy integrand must be convex with G(0) = 0");
  }
  return ordered(dirichlet_energy(csts(u, t, d), G), before.value, u, d);
}

InequalityMargin weighted_check(const GridFunction& u, FlowTime t, const Direction& d,
                                const WeightedIntegrand& F) {
  return ordered(weighted_functional(u, F), weighted_functional(csts(u, t, d), F), u, d);
}

}  // namespace csym
