#include "csym/symmetry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "csym/functionals.hpp"
#include "csym/parallel.hpp"

namespace csym {

namespace {

double dot(const Point& a, const Point& b, std::size_t dims) {
  double s = 0.0;
  for (std::size_t i = 0; i < dims; ++i) s += a[i] * b[i];
  return s;
}

double norm(const Point& a, std::size_t dims) { return std::sqrt(dot(a, a, dims)); }

Point axpy(const Point& y, double tau, const Point& e) {
  return {y[0] + tau * e[0], y[1] + tau * e[1], y[2] + tau * e[2]};
}

bool inside_box(const GridSpec& spec, const Point& p) {
  for (std::size_t a = 0; a < spec.dims; ++a) {
    if (p[a] < spec.bbox[a].first || p[a] > spec.bbox[a].second) return false;
  }
  return true;
}

double max_abs_axis_coordinate(const GridFunction& w, std::size_t axis) {
  const GridSpec& spec = w.spec();
  double c = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (w[k] > 0.0) c = std::max(c, std::abs(spec.center_of(k)[axis]));
  }
  return c;
}

// Intercept of the least-squares line through (t, D) with weights t^2.
double weighted_intercept(const std::vector<double>& t, const std::vector<double>& d) {
  double sw = 0.0, st = 0.0, stt = 0.0, sd = 0.0, std_ = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double w = t[i] * t[i];
    sw += w;
    st += w * t[i];
    stt += w * t[i] * t[i];
    sd += w * d[i];
    std_ += w * t[i] * d[i];
  }
  const double det = sw * stt - st * st;
  if (!(std::abs(det) > 1e-300)) return sd / sw;
  return (stt * sd - st * std_) / det;
}

// Face-adjacent connected components of the cells with mask[k] != 0.
std::vector<std::vector<std::size_t>> components(const GridSpec& spec,
                                                 const std::vector<std::uint8_t>& mask) {
  const auto strides = spec.strides();
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < mask.size(); ++s) {
    if (!mask[s] || seen[s]) continue;
    std::vector<std::size_t> comp;
    stack.assign(1, s);
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      comp.push_back(k);
      const Index idx = spec.unflat(k);
      for (std::size_t a = 0; a < spec.dims; ++a) {
        if (idx[a] > 0) {
          const std::size_t n = k - strides[a];
          if (mask[n] && !seen[n]) {
            seen[n] = 1;
            stack.push_back(n);
          }
        }
        if (idx[a] + 1 < spec.shape[a]) {
          const std::size_t n = k + strides[a];
          if (mask[n] && !seen[n]) {
            seen[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// Solves the dims x dims system a x = b by Gaussian elimination with partial
// pivoting; false when singular relative to the largest pivot.
bool solve_small(Matrix a, Point b, std::size_t dims, Point& x) {
  double scale = 0.0;
  for (std::size_t i = 0; i < dims; ++i) {
    for (std::size_t j = 0; j < dims; ++j) scale = std::max(scale, std::abs(a[i][j]));
  }
  if (!(scale > 0.0)) return false;
  for (std::size_t c = 0; c < dims; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < dims; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-10 * scale) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < dims; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < dims; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  x = Point{0.0, 0.0, 0.0};
  for (std::size_t i = dims; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < dims; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return true;
}

struct CentreFit {
  bool ok = false;
  Point center{};
  double residual = 0.0;
};

CentreFit fit_centre(const GridSpec& spec, const std::vector<std::size_t>& cells,
                     const std::vector<Point>& grad) {
  const std::size_t dims = spec.dims;
  Matrix a{};
  Point b{0.0, 0.0, 0.0};
  for (std::size_t k : cells) {
    const double g = norm(grad[k], dims);
    if (!(g > 0.0)) continue;
    Point n{};
    for (std::size_t i = 0; i < dims; ++i) n[i] = grad[k][i] / g;
    const Point x = spec.center_of(k);
    for (std::size_t i = 0; i < dims; ++i) {
      for (std::size_t j = 0; j < dims; ++j) {
        const double p = (i == j ? 1.0 : 0.0) - n[i] * n[j];
        a[i][j] += p;
        b[i] += p * x[j];
      }
    }
  }
  CentreFit fit;
  if (!solve_small(a, b, dims, fit.center)) return fit;
  fit.ok = true;
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t k : cells) {
    const double g = norm(grad[k], dims);
    if (!(g > 0.0)) continue;
    Point r{};
    const Point x = spec.center_of(k);
    for (std::size_t i = 0; i < dims; ++i) r[i] = x[i] - fit.center[i];
    const double along = dot(r, grad[k], dims) / g;
    const double off2 = std::max(dot(r, r, dims) - along * along, 0.0);
    acc += off2;
    ++used;
  }
  fit.residual = used > 0 ? std::sqrt(acc / static_cast<double>(used)) : 0.0;
  return fit;
}

double distance(const Point& a, const Point& b, std::size_t dims) {
  double s = 0.0;
  for (std::size_t i = 0; i < dims; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

std::vector<double> default_t_list() {
  std::vector<double> t(8);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 0.2 * std::ldexp(1.0, -static_cast<int>(k));
  return t;
}

double default_energy_tolerance(const GridFunction& u, const ScalarMap& G) {
  const std::vector<double> grad = gradient_magnitudes(u);
  const double top = grad.empty() ? 0.0 : *std::max_element(grad.begin(), grad.end());
  // G convex: G' is largest at the top of the gradient range.
  const double dz = std::max(top, 1.0) * 1e-6;
  const double slope = (G(top + dz) - G(std::max(top - dz, 0.0))) / (top + dz - std::max(top - dz, 0.0));
  return 10.0 * u.spec().max_cell_width() * std::abs(slope);
}

EnergyDerivative energy_derivative(const GridFunction& u, const ScalarMap& G, const Direction& d,
                                   std::span<const double> t_list, double tol) {
  if (t_list.size() < 3) throw std::invalid_argument("t_list needs at least 3 entries");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0 && t_list[i] < 1.0)) {
      throw std::invalid_argument("t_list entries must lie in (0, 1)");
    }
    if (i > 0 && !(t_list[i] < t_list[i - 1])) {
      throw std::invalid_argument("t_list must be strictly decreasing");
    }
  }
  const GridFunction w = d.rotation ? resample_rotated(u, *d.rotation) : u;
  const Direction frame = Direction::along(d.axis);
  const double h = w.spec().cell_width(d.axis);
  const double reach = max_abs_axis_coordinate(w, d.axis);

  EnergyDerivative out;
  out.tolerance = tol > 0.0 ? tol : default_energy_tolerance(u, G);
  for (double t : t_list) {
    (t * reach >= 4.0 * h ? out.t_used : out.t_skipped).push_back(t);
  }
  while (out.t_used.size() < 3) {
    out.t_used.push_back(out.t_skipped.front());
    out.t_skipped.erase(out.t_skipped.begin());
  }
  const double e0 = dirichlet_energy(w, G);
  out.quotients.resize(out.t_used.size());
  parallel_for(out.t_used.size(), [&](std::size_t i) {
    const double t = out.t_used[i];
    out.quotients[i] = (e0 - dirichlet_energy(csts(w, FlowTime(t), frame), G)) / t;
  });
  out.value = weighted_intercept(out.t_used, out.quotients);
  const auto [lo, hi] = std::minmax_element(out.quotients.begin(), out.quotients.end());
  out.uncertainty = *hi - *lo;
  out.symmetric = out.value <= out.tolerance;
  return out;
}

std::optional<Point> reflection_point(const GridFunction& u, const Point& y, const Direction& d,
                                      double grad_tol) {
  const GridSpec& spec = u.spec();
  const std::size_t dims = spec.dims;
  const Point e = d.world_vector(dims);
  const double level = u.at(y);
  if (!(level > 0.0 && level < u.max_value())) {
    throw std::invalid_argument("reflection_point needs 0 < u(y) < max u");
  }
  if (!(dot(u.gradient_at(y), e, dims) > grad_tol)) {
    throw std::invalid_argument("reflection_point needs a positive slope along the direction");
  }
  const double h = spec.min_cell_width();
  const double step = h / 8.0;
  auto f = [&](double tau) { return u.at(axpy(y, tau, e)) - level; };

  bool above = false;
  double tau = 0.0;
  for (;;) {
    tau += step;
    const Point p = axpy(y, tau, e);
    if (!inside_box(spec, p)) return std::nullopt;
    const double v = f(tau);
    if (v > 0.0) {
      above = true;
      continue;
    }
    if (!above) {
      if (tau > 2.0 * h) return std::nullopt;
      continue;
    }
    break;
  }
  double lo = tau - step;
  double hi = tau;
  for (int it = 0; it < 60 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double crossing = 0.5 * (lo + hi);
  // The fibre left the support within the crossing cell: a grid-scale drop,
  // not a recrossing of the level.
  if (u.at(axpy(y, crossing + h, e)) == 0.0) return std::nullopt;
  return axpy(y, crossing, e);
}

std::vector<Point> default_samples(const GridFunction& u, const Direction& d, double grad_tol,
                                   std::size_t max_points, double lo_frac, double hi_frac) {
  const GridSpec& spec = u.spec();
  const std::size_t dims = spec.dims;
  const Point e = d.world_vector(dims);
  const double top = u.max_value();
  std::vector<Point> all;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double v = u[k];
    if (!(v > lo_frac * top && v < hi_frac * top)) continue;
    const Point x = spec.center_of(k);
    if (dot(u.gradient_at(x), e, dims) > grad_tol) all.push_back(x);
  }
  if (max_points == 0 || all.size() <= max_points) return all;
  const std::size_t stride = (all.size() + max_points - 1) / max_points;
  std::vector<Point> out;
  for (std::size_t i = 0; i < all.size(); i += stride) out.push_back(all[i]);
  return out;
}

LocalSymmetry local_symmetry_check(const GridFunction& u, const Direction& d,
                                   std::span<const Point> samples, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("local symmetry tolerance must be > 0");
  const std::size_t dims = u.dims();
  const Point e = d.world_vector(dims);
  LocalSymmetry out;
  out.direction = d;
  out.pairs.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    ReflectionPair& pair = out.pairs[i];
    pair.y = samples[i];
    pair.reflected = reflection_point(u, samples[i], d);
    if (!pair.reflected) return;
    const Point gy = u.gradient_at(pair.y);
    const Point gr = u.gradient_at(*pair.reflected);
    pair.normal_residual = std::abs(dot(gy, e, dims) + dot(gr, e, dims));
    Point diff{};
    for (std::size_t a = 0; a < dims; ++a) diff[a] = gy[a] - gr[a];
    const double along = dot(diff, e, dims);
    for (std::size_t a = 0; a < dims; ++a) diff[a] -= along * e[a];
    pair.tangential_residual = norm(diff, dims);
  });
  for (const auto& pair : out.pairs) {
    if (!pair.reflected) {
      ++out.not_found;
      continue;
    }
    out.max_residual = std::max(out.max_residual, pair.residual());
  }
  out.pass = out.max_residual <= tol;
  return out;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::empty:
      return "empty";
    case Classification::ball_radial:
      return "ball, radial";
    case Classification::disjoint_balls:
      return "disjoint balls";
    case Classification::annular:
      return "annular decomposition";
    case Classification::non_symmetric:
      return "non-symmetric";
  }
  return "unknown";
}

Decomposition radial_decomposition(const GridFunction& u, double tol,
                                   const DecompositionOptions& options) {
  const GridSpec& spec = u.spec();
  const std::size_t dims = spec.dims;
  if (dims < 2) throw std::invalid_argument("radial decomposition needs at least 2 dimensions");
  const double h = spec.max_cell_width();
  const std::vector<Point> grad = cell_gradients(u);

  Decomposition out;
  out.gradient_tolerance = std::max(tol, 3.0 * u.lipschitz_estimate() * h);
  const double gtol = out.gradient_tolerance;

  std::vector<std::uint8_t> support(spec.size(), 0);
  std::vector<std::uint8_t> active(spec.size(), 0);
  std::vector<std::uint8_t> critical(spec.size(), 0);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (!(u[k] > 0.0)) continue;
    support[k] = 1;
    (norm(grad[k], dims) > gtol ? active : critical)[k] = 1;
  }
  out.support_components = components(spec, support).size();
  out.connected = out.support_components == 1;
  out.critical_mask = critical;
  if (out.support_components == 0) return out;

  std::vector<double> hole_limit;
  for (const auto& comp : components(spec, active)) {
    Annulus ann;
    ann.cells = comp.size();
    const CentreFit fit = fit_centre(spec, comp, grad);
    if (!fit.ok) {
      ann.symmetric = false;
      ann.fit_residual = std::numeric_limits<double>::infinity();
      out.annuli.push_back(ann);
      hole_limit.push_back(0.0);
      continue;
    }
    ann.center = fit.center;
    ann.fit_residual = fit.residual;
    double inner = std::numeric_limits<double>::infinity();
    double outer = 0.0;
    std::size_t decreasing = 0;
    for (std::size_t k : comp) {
      const Point x = spec.center_of(k);
      const double rho = distance(x, ann.center, dims);
      inner = std::min(inner, rho);
      outer = std::max(outer, rho);
      Point r{};
      for (std::size_t a = 0; a < dims; ++a) r[a] = x[a] - ann.center[a];
      if (dot(grad[k], r, dims) < 0.0) ++decreasing;
    }
    ann.decreasing_fraction = static_cast<double>(decreasing) / static_cast<double>(comp.size());
    ann.outer_radius = outer + 0.5 * h;

    // Near a nondegenerate maximum |grad u| ~ kappa rho, so the critical
    // disc has radius about gtol / kappa.
    double kappa = 0.0;
    std::size_t ring_cells = 0;
    for (std::size_t k : comp) {
      const double rho = distance(spec.center_of(k), ann.center, dims);
      if (rho <= inner + 2.0 * h && rho > 0.0) {
        kappa += norm(grad[k], dims) / rho;
        ++ring_cells;
      }
    }
    kappa = ring_cells > 0 ? kappa / static_cast<double>(ring_cells) : 0.0;
    const double disc = kappa > 0.0 ? gtol / kappa : 0.0;
    const bool point_hole = inner <= disc + options.collar_cells * h;
    ann.inner_radius = point_hole ? 0.0 : inner - 0.5 * h;
    hole_limit.push_back(point_hole ? inner + h : 0.0);

    if (ann.inner_radius > 0.0) {
      double ring = std::numeric_limits<double>::infinity();
      for (std::size_t k : comp) {
        if (distance(spec.center_of(k), ann.center, dims) <= inner + h) ring = std::min(ring, u[k]);
      }
      const double slack = u.lipschitz_estimate() * h;
      for (std::size_t k = 0; k < spec.size() && ann.hole_ordered; ++k) {
        if (distance(spec.center_of(k), ann.center, dims) < inner && u[k] < ring - slack) {
          ann.hole_ordered = false;
        }
      }
    }
    ann.symmetric = ann.fit_residual <= options.fit_cells * h &&
                    ann.decreasing_fraction >= options.decreasing_fraction && ann.hole_ordered;
    out.annuli.push_back(ann);
  }

  for (const auto& blob : components(spec, critical)) {
    Point mean{0.0, 0.0, 0.0};
    for (std::size_t k : blob) {
      const Point x = spec.center_of(k);
      for (std::size_t a = 0; a < dims; ++a) mean[a] += x[a] / static_cast<double>(blob.size());
    }
    for (std::size_t i = 0; i < out.annuli.size(); ++i) {
      const Annulus& ann = out.annuli[i];
      if (!ann.symmetric || !(hole_limit[i] > 0.0)) continue;
      const bool inside = std::all_of(blob.begin(), blob.end(), [&](std::size_t k) {
        return distance(spec.center_of(k), ann.center, dims) <= hole_limit[i];
      });
      if (inside) {
        for (std::size_t k : blob) out.critical_mask[k] = 0;
        out.isolated_critical_points.push_back(mean);
        break;
      }
    }
  }
  out.critical_cells = static_cast<std::size_t>(
      std::count(out.critical_mask.begin(), out.critical_mask.end(), std::uint8_t{1}));

  for (std::size_t i = 0; i < out.annuli.size(); ++i) {
    for (std::size_t j = i + 1; j < out.annuli.size(); ++j) {
      const Annulus& a = out.annuli[i];
      const Annulus& b = out.annuli[j];
      const double gap = distance(a.center, b.center, dims);
      const bool apart = gap >= a.outer_radius + b.outer_radius - 2.0 * h;
      const bool b_in_hole = gap + b.outer_radius <= a.inner_radius + 2.0 * h;
      const bool a_in_hole = gap + a.outer_radius <= b.inner_radius + 2.0 * h;
      if (!(apart || b_in_hole || a_in_hole)) out.annuli_disjoint = false;
    }
  }

  const bool all_symmetric = std::all_of(out.annuli.begin(), out.annuli.end(),
                                         [](const Annulus& a) { return a.symmetric; });
  const bool all_balls = std::all_of(out.annuli.begin(), out.annuli.end(),
                                     [](const Annulus& a) { return a.inner_radius == 0.0; });
  if (!all_symmetric || !out.annuli_disjoint) {
    out.classification = Classification::non_symmetric;
  } else if (out.annuli.empty()) {
    out.classification = Classification::annular;
  } else if (all_balls && out.critical_cells == 0) {
    out.classification =
        out.annuli.size() == 1 ? Classification::ball_radial : Classification::disjoint_balls;
  } else {
    out.classification = Classification::annular;
  }
  return out;
}

std::vector<Direction> sample_directions(std::size_t dims, std::size_t k) {
  std::vector<Direction> out;
  if (dims == 1) {
    Matrix flip{};
    flip[0][0] = -1.0;
    flip[1][1] = 1.0;
    flip[2][2] = 1.0;
    out.push_back(Direction::along(0));
    out.push_back(Direction::rotated(0, flip, 1));
    return out;
  }
  if (dims == 2) {
    if (k == 0) k = 16;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == 0) {
        out.push_back(Direction::along(0));
      } else {
        out.push_back(Direction::from_angle(2.0 * std::numbers::pi * static_cast<double>(i) /
                                            static_cast<double>(k)));
      }
    }
    return out;
  }
  if (dims != 3) throw std::invalid_argument("directions are sampled in 1, 2 or 3 dimensions");
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (int c = -1; c <= 1; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        if (a == 1 && b == 0 && c == 0) {
          out.push_back(Direction::along(0));
        } else {
          out.push_back(Direction::from_vector(Point{double(a), double(b), double(c)}, 3));
        }
      }
    }
  }
  return out;
}

bool SymmetryReport::local_pass() const {
  return std::all_of(local.begin(), local.end(), [](const LocalSymmetry& l) { return l.pass; });
}

bool SymmetryReport::energy_pass() const {
  return std::all_of(energy.begin(), energy.end(),
                     [](const EnergyDerivative& e) { return e.symmetric; });
}

bool SymmetryReport::pass() const {
  return local_pass() && energy_pass() && (!decomposition || decomposition->pass());
}

SymmetryReport detect_symmetry(const GridFunction& u, const DetectOptions& options) {
  SymmetryReport report;
  const std::size_t dims = u.dims();
  report.directions = sample_directions(dims, options.directions);
  const double h = u.spec().max_cell_width();
  const double lip = u.lipschitz_estimate();
  report.gradient_tolerance = options.tol > 0.0 ? options.tol : 5.0 * h * lip;
  const double sample_slope = 0.1 * lip;

  report.local.resize(report.directions.size());
  for (std::size_t i = 0; i < report.directions.size(); ++i) {
    const Direction& d = report.directions[i];
    const std::vector<Point> samples = default_samples(u, d, sample_slope);
    report.local[i] = local_symmetry_check(u, d, samples, report.gradient_tolerance);
  }
  if (options.energy) {
    report.energy.reserve(report.directions.size());
    for (const Direction& d : report.directions) {
      report.energy.push_back(energy_derivative(u, options.G, d, options.t_list, options.energy_tol));
    }
  }
  if (options.decomposition && dims >= 2) {
    report.decomposition = radial_decomposition(u, report.gradient_tolerance);
  }
  if (!report.local_pass() || !report.energy_pass() ||
      (report.decomposition && !report.decomposition->pass())) {
    report.theorem_class = "non-symmetric";
  } else if (report.decomposition &&
             report.decomposition->classification == Classification::ball_radial) {
    report.theorem_class = "radial";
  } else {
    report.theorem_class = "locally symmetric only";
  }
  return report;
}

}  // namespace csym
