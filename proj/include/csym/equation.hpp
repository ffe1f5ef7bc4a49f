#pragma once

// Data (g, f, lambda) of the quasilinear problem
//   -div( g(|grad u|) grad u / |grad u| ) = f(|x|, u),  u = 0, |grad u| = lambda(|x|) on the boundary,
// with the derived primitive G(z) = int_0^z g and h(z) = G(z) - z g(z).

#include <memory>
#include <string>
#include <vector>

#include "csym/scalar_map.hpp"

namespace csym {

struct HypothesisReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Which of the three radial-symmetry sufficient conditions hold on a sample.
struct SymmetryCases {
  bool nonnegative_source = false;       // f >= 0
  bool strictly_decreasing_in_r = false; // r -> f(r, v) strictly decreasing
  bool autonomous_nonincreasing = false; // f = f(v), nonincreasing in v
  bool any() const {
    return nonnegative_source || strictly_decreasing_in_r || autonomous_nonincreasing;
  }
};

class EquationSpec {
 public:
  /// z_max bounds the working interval of g (g_inverse and the G table).
  EquationSpec(ScalarMap g, SourceMap f, ScalarMap lambda, double z_max = 1e3);

  const ScalarMap& g() const { return g_; }
  const SourceMap& f() const { return f_; }
  const ScalarMap& lambda() const { return lambda_; }
  double z_max() const { return z_max_; }

  /// int_0^z g, from a cached Gauss-Legendre table.
  double primitive(double z) const;
  /// G(z) - z g(z)
  double h(double z) const;
  /// sup |f(r, v)| over [0, r_max] x [0, v_max] (sampled).
  double source_bound(double r_max, double v_max) const;

  /// Samples the standing hypotheses on [0, z_max] for g and h and on
  /// [0, r_max] x [0, v_max] for f and lambda.
  HypothesisReport check_hypotheses(double r_max, double v_max) const;
  SymmetryCases symmetry_cases(double r_max, double v_max) const;

  /// min over sampled vector pairs of (g(|y|)y/|y| - g(|z|)z/|z|).(y - z);
  /// nonnegative for every admissible g.
  double monotone_operator_minimum(std::size_t dims, std::size_t pairs, unsigned seed) const;

 private:
  ScalarMap g_;
  SourceMap f_;
  ScalarMap lambda_;
  double z_max_;
  std::shared_ptr<const std::vector<double>> primitive_table_;
  double table_step_ = 0.0;
};

/// p-Laplacian data: g(z) = z^{p-1}, f = const, lambda = const.
EquationSpec p_laplace_torsion(double p, double source, double lambda, double z_max = 1e3);

}  // namespace csym
