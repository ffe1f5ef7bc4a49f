#include "csym/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csym {

FlowTime::FlowTime(double t) {
  if (std::isnan(t) || t < 0.0) {
    throw std::invalid_argument("flow time must be >= 0");
  }
  if (std::isinf(t)) {
    infinite_ = true;
  } else {
    value_ = t;
  }
}

FlowTime FlowTime::infinity() {
  FlowTime t;
  t.infinite_ = true;
  return t;
}

double IntervalSet::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals_) m += iv.length();
  return m;
}

bool IntervalSet::contains(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.right; });
  return it != intervals_.end() && it->left < x && x < it->right;
}

bool IntervalSet::is_subset_of(const IntervalSet& other, double tol) const {
  std::size_t j = 0;
  for (const auto& iv : intervals_) {
    while (j < other.intervals_.size() && other.intervals_[j].right + tol < iv.right) ++j;
    if (j == other.intervals_.size()) return false;
    if (other.intervals_[j].left - tol > iv.left) return false;
  }
  return true;
}

IntervalSet normalize(std::vector<Interval> raw) {
  for (const auto& iv : raw) {
    if (!std::isfinite(iv.left) || !std::isfinite(iv.right)) {
      throw std::invalid_argument("interval endpoints must be finite");
    }
    if (iv.left > iv.right) {
      throw std::invalid_argument("interval has left > right");
    }
  }
  std::erase_if(raw, [](const Interval& iv) { return iv.left == iv.right; });
  std::sort(raw.begin(), raw.end(),
            [](const Interval& a, const Interval& b) { return a.left < b.left; });
  std::vector<Interval> out;
  out.reserve(raw.size());
  for (const auto& iv : raw) {
    if (!out.empty() && iv.left <= out.back().right) {
      out.back().right = std::max(out.back().right, iv.right);
    } else {
      out.push_back(iv);
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet normalize(std::span<const std::pair<double, double>> raw) {
  std::vector<Interval> v;
  v.reserve(raw.size());
  for (const auto& [l, r] : raw) v.push_back({l, r});
  return normalize(std::move(v));
}

IntervalSet steiner_1d(const IntervalSet& s) {
  if (s.empty()) return {};
  const double half = 0.5 * s.measure();
  return normalize(std::vector<Interval>{{-half, half}});
}

namespace {

struct Piece {
  double center;
  double radius;
};

// Flow time until pieces a < b touch. The whole configuration contracts
// uniformly toward 0 while radii stay put, so only neighbours can meet first.
double contact_time(const Piece& a, const Piece& b) {
  const double ratio = (b.center - a.center) / (a.radius + b.radius);
  return ratio > 1.0 ? std::log(ratio) : 0.0;
}

}  // namespace

double collision_time(const IntervalSet& s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    best = std::min(best, contact_time({s[i].center(), s[i].radius()},
                                       {s[i + 1].center(), s[i + 1].radius()}));
  }
  return best;
}

IntervalSet flow(const IntervalSet& s, FlowTime t) {
  if (t.is_infinite()) return steiner_1d(s);
  if (t.value() == 0.0 || s.empty()) return s;

  std::vector<Piece> pieces;
  pieces.reserve(s.size());
  for (const auto& iv : s.intervals()) pieces.push_back({iv.center(), iv.radius()});

  double remaining = t.value();
  std::vector<double> when;
  while (true) {
    if (pieces.size() < 2) {
      const double scale = std::exp(-remaining);
      for (auto& p : pieces) p.center *= scale;
      break;
    }
    when.resize(pieces.size() - 1);
    double first = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      when[i] = contact_time(pieces[i], pieces[i + 1]);
      first = std::min(first, when[i]);
    }
    if (first >= remaining) {
      const double scale = std::exp(-remaining);
      for (auto& p : pieces) p.center *= scale;
      break;
    }
    const double scale = std::exp(-first);
    for (auto& p : pieces) p.center *= scale;
    remaining -= first;

    // Fuse every chain of neighbours meeting at this instant.
    const double same_instant = 1e-13 * (1.0 + first);
    std::vector<Piece> fused;
    fused.reserve(pieces.size());
    std::size_t i = 0;
    while (i < pieces.size()) {
      std::size_t j = i;
      double radius = pieces[i].radius;
      while (j + 1 < pieces.size() && when[j] - first <= same_instant) {
        ++j;
        radius += pieces[j].radius;
      }
      if (j == i) {
        fused.push_back(pieces[i]);
      } else {
        const double left = pieces[i].center - pieces[i].radius;
        const double right = pieces[j].center + pieces[j].radius;
        fused.push_back({0.5 * (left + right), radius});
      }
      i = j + 1;
    }
    pieces = std::move(fused);
  }

  std::vector<Interval> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) out.push_back({p.center - p.radius, p.center + p.radius});
  return normalize(std::move(out));
}

namespace {

double distance_to(double x, const IntervalSet& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& iv : b.intervals()) {
    if (x < iv.left) {
      best = std::min(best, iv.left - x);
    } else if (x > iv.right) {
      best = std::min(best, x - iv.right);
    } else {
      return 0.0;
    }
  }
  return best;
}

double directed_hausdorff(const IntervalSet& a, const IntervalSet& b) {
  // d(., B) restricted to a closed interval peaks at its endpoints or at the
  // midpoint of a gap of B.
  double worst = 0.0;
  for (const auto& iv : a.intervals()) {
    worst = std::max({worst, distance_to(iv.left, b), distance_to(iv.right, b)});
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      const double mid = 0.5 * (b[k].right + b[k + 1].left);
      if (mid > iv.left && mid < iv.right) worst = std::max(worst, distance_to(mid, b));
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace csym
