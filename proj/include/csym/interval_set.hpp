#pragma once

// One-dimensional continuous symmetrization of finite unions of intervals.
//
// E_t moves every component interval toward the origin with its centre
// following c(t) = c0 * exp(-t) while its length stays fixed; components that
// come into contact are fused and continue under the same law. E_0 is the
// identity and E_inf is the centred interval of equal measure.

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace csym {

struct Interval {
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
  double center() const { return 0.5 * (left + right); }
  double radius() const { return 0.5 * (right - left); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Flow parameter t in [0, +inf]; +inf is a distinguished value.
class FlowTime {
 public:
  FlowTime() = default;
  /// Throws std::invalid_argument for negative or NaN values. Passing
  /// +infinity is equivalent to FlowTime::infinity().
  explicit FlowTime(double t);

  static FlowTime infinity();

  bool is_infinite() const { return infinite_; }
  /// +infinity for the distinguished value.
  double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend bool operator==(const FlowTime&, const FlowTime&) = default;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Finite union of pairwise disjoint open intervals, stored sorted with
/// strictly positive gaps (touching pieces are merged).
class IntervalSet {
 public:
  IntervalSet() = default;

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  /// Sum of lengths.
  double measure() const;
  bool contains(double x) const;
  /// Set inclusion up to `tol` slack on the endpoints.
  bool is_subset_of(const IntervalSet& other, double tol = 0.0) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  friend IntervalSet normalize(std::vector<Interval> raw);
  explicit IntervalSet(std::vector<Interval> v) : intervals_(std::move(v)) {}

  std::vector<Interval> intervals_;
};

/// Sorts, drops empty pieces and merges overlapping or touching ones.
/// Throws std::invalid_argument on non-finite endpoints or left > right.
IntervalSet normalize(std::vector<Interval> raw);
IntervalSet normalize(std::span<const std::pair<double, double>> raw);

/// (-|S|/2, |S|/2); the empty set maps to itself.
IntervalSet steiner_1d(const IntervalSet& s);

/// Earliest t > 0 at which two neighbouring components touch under the
/// exponential centre flow, or +infinity when there is at most one component.
double collision_time(const IntervalSet& s);

/// E_t(S). Contacts are resolved by exact event scheduling; all contacts that
/// occur at the same instant are fused in one event.
IntervalSet flow(const IntervalSet& s, FlowTime t);

/// Largest distance from a point of one set to the closure of the other.
double hausdorff_distance(const IntervalSet& a, const IntervalSet& b);

}  // namespace csym
