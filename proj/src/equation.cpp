#include "csym/equation.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace csym {

namespace {

constexpr std::size_t kTableIntervals = 4096;
constexpr int kSamples = 129;

double gauss_integral(const ScalarMap& g, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss<double, 15>::integrate([&g](double z) { return g(z); }, a, b);
}

std::string describe(const char* what, double where) {
  std::ostringstream os;
  os << what << " (near " << where << ")";
  return os.str();
}

}  // namespace

EquationSpec::EquationSpec(ScalarMap g, SourceMap f, ScalarMap lambda, double z_max)
    : g_(std::move(g)), f_(std::move(f)), lambda_(std::move(lambda)), z_max_(z_max) {
  if (!(z_max_ > 0.0) || !std::isfinite(z_max_)) {
    throw std::invalid_argument("working interval of g must be (0, z_max] with finite z_max");
  }
  table_step_ = z_max_ / static_cast<double>(kTableIntervals);
  auto table = std::make_shared<std::vector<double>>(kTableIntervals + 1, 0.0);
  for (std::size_t i = 0; i < kTableIntervals; ++i) {
    (*table)[i + 1] = (*table)[i] + gauss_integral(g_, i * table_step_, (i + 1) * table_step_);
  }
  primitive_table_ = std::move(table);
}

double EquationSpec::primitive(double z) const {
  if (z <= 0.0) return 0.0;
  if (z > z_max_) return primitive_table_->back() + gauss_integral(g_, z_max_, z);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(z / table_step_), kTableIntervals);
  return (*primitive_table_)[k] + gauss_integral(g_, k * table_step_, z);
}

double EquationSpec::h(double z) const { return primitive(z) - z * g_(z); }

double EquationSpec::source_bound(double r_max, double v_max) const {
  double best = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    for (int j = 0; j < kSamples; ++j) {
      const double r = r_max * i / (kSamples - 1);
      const double v = v_max * j / (kSamples - 1);
      best = std::max(best, std::abs(f_(r, v)));
    }
  }
  return best;
}

HypothesisReport EquationSpec::check_hypotheses(double r_max, double v_max) const {
  HypothesisReport report;
  if (g_(0.0) != 0.0) report.violations.push_back("g(0) != 0");
  double prev = g_(0.0);
  for (int i = 1; i < 4 * kSamples; ++i) {
    const double z = z_max_ * i / (4 * kSamples - 1);
    const double cur = g_(z);
    if (!(cur > prev)) {
      report.violations.push_back(describe("g is not strictly increasing", z));
      break;
    }
    prev = cur;
  }
  double lam_prev = lambda_(0.0);
  if (!(lam_prev > 0.0)) report.violations.push_back("lambda is not positive at 0");
  for (int i = 1; i < kSamples; ++i) {
    const double r = r_max * i / (kSamples - 1);
    const double cur = lambda_(r);
    if (!(cur > 0.0)) {
      report.violations.push_back(describe("lambda is not positive", r));
      break;
    }
    if (cur < lam_prev) {
      report.violations.push_back(describe("lambda is not nondecreasing", r));
      break;
    }
    lam_prev = cur;
  }
  bool f_ok = true;
  for (int j = 0; j < kSamples && f_ok; ++j) {
    const double v = v_max * j / (kSamples - 1);
    double fp = f_(0.0, v);
    for (int i = 1; i < kSamples; ++i) {
      const double r = r_max * i / (kSamples - 1);
      const double cur = f_(r, v);
      if (cur > fp) {
        report.violations.push_back(describe("f is not nonincreasing in r", r));
        f_ok = false;
        break;
      }
      fp = cur;
    }
  }
  double h_prev = h(0.0);
  for (int i = 1; i < kSamples; ++i) {
    const double z = z_max_ * i / (kSamples - 1);
    const double cur = h(z);
    if (cur > h_prev + 1e-9 * (1.0 + std::abs(h_prev))) {
      report.violations.push_back(describe("h = G - z g is not nonincreasing", z));
      break;
    }
    h_prev = cur;
  }
  return report;
}

SymmetryCases EquationSpec::symmetry_cases(double r_max, double v_max) const {
  SymmetryCases cases{true, true, true};
  for (int j = 0; j < kSamples; ++j) {
    const double v = v_max * j / (kSamples - 1);
    const double at_origin = f_(0.0, v);
    double prev = at_origin;
    for (int i = 0; i < kSamples; ++i) {
      const double r = r_max * i / (kSamples - 1);
      const double cur = f_(r, v);
      if (cur < 0.0) cases.nonnegative_source = false;
      if (i > 0 && !(cur < prev)) cases.strictly_decreasing_in_r = false;
      if (cur != at_origin) cases.autonomous_nonincreasing = false;
      prev = cur;
    }
    if (j > 0 && f_(0.0, v) > f_(0.0, v_max * (j - 1) / (kSamples - 1))) {
      cases.autonomous_nonincreasing = false;
    }
  }
  return cases;
}

double EquationSpec::monotone_operator_minimum(std::size_t dims, std::size_t pairs,
                                               unsigned seed) const {
  std::mt19937_64 rng(seed);
  const double span = std::min(z_max_, 10.0);
  std::uniform_real_distribution<double> coord(-span, span);
  auto flux = [this, dims](const std::vector<double>& y) {
    double n = 0.0;
    for (double c : y) n += c * c;
    n = std::sqrt(n);
    std::vector<double> out(dims, 0.0);
    if (n == 0.0) return out;
    const double s = g_(n) / n;
    for (std::size_t i = 0; i < dims; ++i) out[i] = s * y[i];
    return out;
  };
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> y(dims), z(dims);
  for (std::size_t k = 0; k < pairs; ++k) {
    for (std::size_t i = 0; i < dims; ++i) {
      y[i] = coord(rng) / std::sqrt(static_cast<double>(dims));
      z[i] = coord(rng) / std::sqrt(static_cast<double>(dims));
    }
    const auto fy = flux(y);
    const auto fz = flux(z);
    double acc = 0.0;
    for (std::size_t i = 0; i < dims; ++i) acc += (fy[i] - fz[i]) * (y[i] - z[i]);
    worst = std::min(worst, acc);
  }
  return worst;
}

EquationSpec p_laplace_torsion(double p, double source, double lambda, double z_max) {
  if (!(p > 1.0)) throw std::invalid_argument("p-Laplacian needs p > 1");
  return EquationSpec(ScalarMap::power(p - 1.0), SourceMap::constant(source),
                      ScalarMap::constant(lambda), z_max);
}

}  // namespace csym
