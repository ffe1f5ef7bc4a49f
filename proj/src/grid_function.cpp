#include "csym/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "csym/kernels.hpp"
#include "csym/parallel.hpp"

namespace csym {

void GridSpec::validate() const {
  if (dims < 1 || dims > kMaxDims) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (bbox.size() != dims || shape.size() != dims) {
    throw std::invalid_argument("grid bbox/shape do not match the dimension");
  }
  for (std::size_t a = 0; a < dims; ++a) {
    if (shape[a] < 3) throw std::invalid_argument("grid needs at least 3 cells per axis");
    if (!std::isfinite(bbox[a].first) || !std::isfinite(bbox[a].second) ||
        !(bbox[a].second > bbox[a].first)) {
      throw std::invalid_argument("grid bbox needs finite max > min on every axis");
    }
  }
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (std::size_t a = 0; a < dims; ++a) n *= shape[a];
  return n;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < dims; ++a) v *= cell_width(a);
  return v;
}

double GridSpec::min_cell_width() const {
  double h = cell_width(0);
  for (std::size_t a = 1; a < dims; ++a) h = std::min(h, cell_width(a));
  return h;
}

double GridSpec::max_cell_width() const {
  double h = cell_width(0);
  for (std::size_t a = 1; a < dims; ++a) h = std::max(h, cell_width(a));
  return h;
}

std::array<std::size_t, kMaxDims> GridSpec::strides() const {
  std::array<std::size_t, kMaxDims> s{0, 0, 0};
  std::size_t acc = 1;
  for (std::size_t a = dims; a-- > 0;) {
    s[a] = acc;
    acc *= shape[a];
  }
  return s;
}

std::size_t GridSpec::flat(const Index& idx) const {
  std::size_t k = 0;
  for (std::size_t a = 0; a < dims; ++a) k = k * shape[a] + idx[a];
  return k;
}

Index GridSpec::unflat(std::size_t k) const {
  Index idx{0, 0, 0};
  for (std::size_t a = dims; a-- > 0;) {
    idx[a] = k % shape[a];
    k /= shape[a];
  }
  return idx;
}

Point GridSpec::center_of(std::size_t k) const {
  const Index idx = unflat(k);
  Point x{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < dims; ++a) x[a] = cell_center(a, idx[a]);
  return x;
}

bool GridSpec::on_boundary_layer(const Index& idx) const {
  for (std::size_t a = 0; a < dims; ++a) {
    if (idx[a] == 0 || idx[a] + 1 == shape[a]) return true;
  }
  return false;
}

double GridSpec::enclosing_radius() const {
  double r2 = 0.0;
  for (std::size_t a = 0; a < dims; ++a) {
    const double m = std::max(std::abs(bbox[a].first), std::abs(bbox[a].second));
    r2 += m * m;
  }
  return std::sqrt(r2);
}

GridSpec cube_grid(std::size_t dims, std::size_t n, double half) {
  GridSpec spec;
  spec.dims = dims;
  spec.bbox.assign(dims, {-half, half});
  spec.shape.assign(dims, n);
  spec.validate();
  return spec;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size()) {
    throw std::invalid_argument("grid holds " + std::to_string(values_.size()) +
                                " values, shape needs " + std::to_string(spec_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("grid values must be finite and >= 0");
    }
    if (v != 0.0 && spec_.on_boundary_layer(spec_.unflat(k))) {
      throw std::invalid_argument("grid values on the boundary layer of cells must be 0");
    }
  }
}

GridFunction GridFunction::sample(const GridSpec& spec,
                                  const std::function<double(const Point&)>& fn) {
  spec.validate();
  std::vector<double> values(spec.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = fn(spec.center_of(k));
  return GridFunction(spec, std::move(values));
}

GridFunction GridFunction::zeros(const GridSpec& spec) {
  spec.validate();
  return GridFunction(spec, std::vector<double>(spec.size(), 0.0));
}

double GridFunction::at(const Point& x) const {
  std::array<long, kMaxDims> base{0, 0, 0};
  std::array<double, kMaxDims> frac{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < spec_.dims; ++a) {
    const double s = (x[a] - spec_.bbox[a].first) / spec_.cell_width(a) - 0.5;
    if (!(s > -1.0 && s < static_cast<double>(spec_.shape[a]))) return 0.0;
    const double fl = std::floor(s);
    base[a] = static_cast<long>(fl);
    frac[a] = s - fl;
  }
  double acc = 0.0;
  const std::size_t corners = std::size_t{1} << spec_.dims;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    Index idx{0, 0, 0};
    bool inside = true;
    for (std::size_t a = 0; a < spec_.dims; ++a) {
      const bool up = (c >> a) & 1U;
      const long i = base[a] + (up ? 1 : 0);
      w *= up ? frac[a] : 1.0 - frac[a];
      if (i < 0 || i >= static_cast<long>(spec_.shape[a])) {
        inside = false;
        break;
      }
      idx[a] = static_cast<std::size_t>(i);
    }
    if (inside && w != 0.0) acc += w * values_[spec_.flat(idx)];
  }
  return acc;
}

Point GridFunction::gradient_at(const Point& x) const {
  Point g{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < spec_.dims; ++a) {
    const double h = spec_.cell_width(a);
    Point p = x;
    Point m = x;
    p[a] += h;
    m[a] -= h;
    g[a] = (at(p) - at(m)) / (2.0 * h);
  }
  return g;
}

double GridFunction::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double GridFunction::lipschitz_estimate() const {
  // Pairs (k, k + stride) that wrap across a fibre end join two boundary-layer
  // cells, which are zero, so the flat shifted comparison is exact.
  const auto strides = spec_.strides();
  const std::span<const double> v(values_);
  double best = 0.0;
  for (std::size_t a = 0; a < spec_.dims; ++a) {
    const std::size_t s = strides[a];
    if (s >= v.size()) continue;
    const double d = kernels::max_abs_diff(v.first(v.size() - s), v.subspan(s));
    best = std::max(best, d / spec_.cell_width(a));
  }
  return best;
}

double GridFunction::support_radius() const {
  double r2 = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] <= 0.0) continue;
    const Point x = spec_.center_of(k);
    double s = 0.0;
    for (std::size_t a = 0; a < spec_.dims; ++a) s += x[a] * x[a];
    r2 = std::max(r2, s);
  }
  return std::sqrt(r2);
}

std::size_t GridFunction::count_at_least(double c) const {
  return kernels::count_at_least(values_, c);
}

Direction Direction::rotated(std::size_t axis, const Matrix& q, std::size_t dims) {
  if (axis >= dims) throw std::invalid_argument("direction axis out of range");
  for (std::size_t i = 0; i < dims; ++i) {
    for (std::size_t j = 0; j < dims; ++j) {
      double dotp = 0.0;
      for (std::size_t k = 0; k < dims; ++k) dotp += q[k][i] * q[k][j];
      if (std::abs(dotp - (i == j ? 1.0 : 0.0)) > 1e-12) {
        throw std::invalid_argument("direction rotation is not orthonormal");
      }
    }
  }
  return {axis, q};
}

Direction Direction::from_angle(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Matrix q{};
  q[0] = {c, -s, 0.0};
  q[1] = {s, c, 0.0};
  q[2] = {0.0, 0.0, 1.0};
  return {0, q};
}

Direction Direction::from_vector(const Point& v, std::size_t dims) {
  if (dims == 2) return from_angle(std::atan2(v[1], v[0]));
  if (dims != 3) throw std::invalid_argument("from_vector needs 2 or 3 dimensions");
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(n > 0.0)) throw std::invalid_argument("direction vector must be nonzero");
  const Point e1{v[0] / n, v[1] / n, v[2] / n};
  const Point helper = std::abs(e1[0]) < 0.9 ? Point{1.0, 0.0, 0.0} : Point{0.0, 1.0, 0.0};
  const double proj = helper[0] * e1[0] + helper[1] * e1[1] + helper[2] * e1[2];
  Point e2{helper[0] - proj * e1[0], helper[1] - proj * e1[1], helper[2] - proj * e1[2]};
  const double n2 = std::sqrt(e2[0] * e2[0] + e2[1] * e2[1] + e2[2] * e2[2]);
  for (auto& c : e2) c /= n2;
  const Point e3{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                 e1[0] * e2[1] - e1[1] * e2[0]};
  Matrix q{};
  for (std::size_t i = 0; i < 3; ++i) q[i] = {e1[i], e2[i], e3[i]};
  return {0, q};
}

Point Direction::world_vector(std::size_t dims) const {
  Point e{0.0, 0.0, 0.0};
  if (!rotation) {
    e[axis] = 1.0;
    return e;
  }
  for (std::size_t i = 0; i < dims; ++i) e[i] = (*rotation)[i][axis];
  return e;
}

LevelGrid LevelGrid::explicit_levels(std::vector<double> levels) {
  if (levels.empty()) throw std::invalid_argument("level list is empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0)) throw std::invalid_argument("levels must be positive");
    if (i > 0 && !(levels[i] > levels[i - 1])) {
      throw std::invalid_argument("levels must increase strictly");
    }
  }
  return {Mode::explicit_list, std::move(levels)};
}

Matrix transpose(const Matrix& q, std::size_t dims) {
  Matrix t{};
  for (std::size_t i = 0; i < kMaxDims; ++i) t[i][i] = 1.0;
  for (std::size_t i = 0; i < dims; ++i) {
    for (std::size_t j = 0; j < dims; ++j) t[i][j] = q[j][i];
  }
  return t;
}

GridFunction resample_rotated(const GridFunction& u, const Matrix& q) {
  const GridSpec& spec = u.spec();
  const std::size_t dims = spec.dims;
  std::vector<double> out(spec.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Point x = spec.center_of(k);
    Point y{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < dims; ++i) {
      for (std::size_t j = 0; j < dims; ++j) y[i] += q[i][j] * x[j];
    }
    const double v = u.at(y);
    if (v != 0.0 && spec.on_boundary_layer(spec.unflat(k))) {
      throw std::domain_error("rotated support reaches the boundary layer of the grid");
    }
    out[k] = std::max(v, 0.0);
  }
  return GridFunction(spec, std::move(out));
}

double rotation_roundtrip_error(const GridFunction& u, const Direction& d) {
  if (!d.rotation) return 0.0;
  const GridFunction back =
      resample_rotated(resample_rotated(u, *d.rotation), transpose(*d.rotation, u.dims()));
  return kernels::max_abs_diff(back.values(), u.values());
}

namespace {

struct FiberLayout {
  std::size_t n = 0;       // cells along the axis
  std::size_t stride = 0;  // flat stride along the axis
  std::size_t inner = 0;
  std::size_t count = 0;   // number of fibres

  std::size_t base(std::size_t fiber) const {
    const std::size_t o = fiber / inner;
    const std::size_t in = fiber % inner;
    return o * n * inner + in;
  }
};

FiberLayout layout_for(const GridSpec& spec, std::size_t axis) {
  if (axis >= spec.dims) throw std::invalid_argument("direction axis out of range");
  FiberLayout f;
  f.n = spec.shape[axis];
  f.stride = spec.strides()[axis];
  f.inner = f.stride;
  f.count = spec.size() / f.n;
  return f;
}

// Maximal runs of cells satisfying pred, as half-open unit intervals
// [origin + i, origin + j).
template <class Pred>
std::vector<Interval> runs_of(std::span<const double> fiber, double origin, Pred&& pred) {
  std::vector<Interval> runs;
  std::size_t i = 0;
  while (i < fiber.size()) {
    if (!pred(fiber[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < fiber.size() && pred(fiber[j])) ++j;
    runs.push_back({origin + static_cast<double>(i), origin + static_cast<double>(j)});
    i = j;
  }
  return runs;
}

// Writes `value` (max-combined) into the cells whose centres lie in the flowed
// set. Lengths are whole cells, so each piece takes exactly that many cells.
void assign_cells(const IntervalSet& flowed, double first_center, double value,
                  std::span<double> out) {
  long next_free = 0;
  const long n = static_cast<long>(out.size());
  for (const auto& iv : flowed.intervals()) {
    const long count = std::lround(iv.length());
    long start = static_cast<long>(std::ceil(iv.left - first_center - 1e-9));
    start = std::max(start, next_free);
    if (start < 1 || start + count > n - 1) {
      throw std::domain_error("symmetrized support reaches the boundary layer of the grid");
    }
    for (long k = start; k < start + count; ++k) {
      out[static_cast<std::size_t>(k)] = std::max(out[static_cast<std::size_t>(k)], value);
    }
    next_free = start + count;
  }
}

GridFunction csts_along_axis(const GridFunction& u, FlowTime t, std::size_t axis,
                             const LevelGrid& levels) {
  const GridSpec& spec = u.spec();
  const FiberLayout lay = layout_for(spec, axis);
  const double h = spec.cell_width(axis);
  const double origin = spec.bbox[axis].first / h;  // left edge of cell 0, in cells
  const double first_center = origin + 0.5;
  const auto src = u.values();
  std::vector<double> out(spec.size(), 0.0);

  parallel_for(lay.count, [&](std::size_t fiber_id) {
    const std::size_t base = lay.base(fiber_id);
    std::vector<double> fiber(lay.n);
    for (std::size_t i = 0; i < lay.n; ++i) fiber[i] = src[base + i * lay.stride];
    std::vector<double> result(lay.n, 0.0);

    if (levels.mode == LevelGrid::Mode::grid_values) {
      std::vector<double> distinct;
      for (double v : fiber) {
        if (v > 0.0) distinct.push_back(v);
      }
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (double v : distinct) {
        const IntervalSet set = normalize(runs_of(fiber, origin, [v](double x) { return x >= v; }));
        assign_cells(flow(set, t), first_center, v, result);
      }
    } else {
      for (double c : levels.levels) {
        const IntervalSet set = normalize(runs_of(fiber, origin, [c](double x) { return x > c; }));
        if (set.empty()) break;
        assign_cells(flow(set, t), first_center, c, result);
      }
    }
    for (std::size_t i = 0; i < lay.n; ++i) out[base + i * lay.stride] = result[i];
  });
  return GridFunction(spec, std::move(out));
}

}  // namespace

FiberSets superlevel_fibers(const GridFunction& u, double c, const Direction& d) {
  if (!(c > 0.0)) throw std::invalid_argument("superlevel threshold must be > 0");
  if (d.rotation) {
    return superlevel_fibers(resample_rotated(u, *d.rotation), c, Direction::along(d.axis));
  }
  const GridSpec& spec = u.spec();
  const FiberLayout lay = layout_for(spec, d.axis);
  const double h = spec.cell_width(d.axis);
  const double lo = spec.bbox[d.axis].first;
  FiberSets result;
  result.axis = d.axis;
  result.sets.resize(lay.count);
  const auto src = u.values();
  for (std::size_t f = 0; f < lay.count; ++f) {
    std::vector<Interval> runs;
    const std::size_t base = lay.base(f);
    std::size_t i = 0;
    while (i < lay.n) {
      if (!(src[base + i * lay.stride] > c)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < lay.n && src[base + j * lay.stride] > c) ++j;
      runs.push_back({lo + static_cast<double>(i) * h, lo + static_cast<double>(j) * h});
      i = j;
    }
    result.sets[f] = normalize(std::move(runs));
  }
  return result;
}

GridFunction csts(const GridFunction& u, FlowTime t, const Direction& d, const LevelGrid& levels) {
  if (!d.rotation) return csts_along_axis(u, t, d.axis, levels);
  const GridFunction w = resample_rotated(u, *d.rotation);
  const GridFunction wt = csts_along_axis(w, t, d.axis, levels);
  return resample_rotated(wt, transpose(*d.rotation, u.dims()));
}

GridFunction steiner(const GridFunction& u, const Direction& d) {
  return csts(u, FlowTime::infinity(), d);
}

GridFunction cutoff(const GridFunction& u, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("cutoff level must be >= 0");
  std::vector<double> out(u.values().begin(), u.values().end());
  for (auto& v : out) v = std::max(v - eps, 0.0);
  return GridFunction(u.spec(), std::move(out));
}

GridFunction monotone_compose(const GridFunction& u, const ScalarMap& psi) {
  if (psi(0.0) != 0.0) throw std::invalid_argument("monotone map must satisfy psi(0) = 0");
  const double top = std::max(u.max_value(), 1e-300);
  if (monotonicity_defect(psi, 0.0, top, 1025) > 1e-12) {
    throw std::invalid_argument("monotone map must be nondecreasing");
  }
  std::vector<double> out(u.values().begin(), u.values().end());
  for (auto& v : out) v = std::max(psi(v), 0.0);
  return GridFunction(u.spec(), std::move(out));
}

GridFunction refine(const GridFunction& u, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("refinement factor must be >= 1");
  GridSpec fine = u.spec();
  for (auto& n : fine.shape) n *= factor;
  return GridFunction::sample(fine, [&u](const Point& x) { return u.at(x); });
}

}  // namespace csym
