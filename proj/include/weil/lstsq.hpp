#pragma once

#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "weil/index_set.hpp"
#include "weil/point_gen.hpp"
#include "weil/poly_basis.hpp"

namespace weil {

/// Density a weighted fit should emulate when the samples follow the
/// arcsine law.
enum class TargetDensity { Uniform, Chebyshev };

struct WeightScheme {
  enum class Kind { Unit, DensityRatio };

  Kind kind = Kind::Unit;
  TargetDensity target = TargetDensity::Uniform;  // DensityRatio only

  static WeightScheme unit() { return {}; }
  static WeightScheme density_ratio(TargetDensity t) { return {Kind::DensityRatio, t}; }
};

std::string to_string(const WeightScheme& w);
/// "unit", "density_ratio" (uniform target), "density_ratio:uniform" or
/// "density_ratio:chebyshev".
WeightScheme parse_weight_scheme(const std::string& s);

/// w_i = rho(y_i) / rho_c(y_i). For the uniform target this is
/// (pi/2)^d prod_k sqrt(1 - (y_i^k)^2), which vanishes on the boundary; for
/// the Chebyshev target it is identically one.
Eigen::VectorXd compute_weights(const WeightScheme& scheme, const Eigen::MatrixXd& pts);

struct ConditionReport {
  double cond_D = 0.0;  // sigma_max / sigma_min of diag(sqrt(w)) D
  double cond_A = 0.0;  // cond_D^2, the condition number of the Gram matrix
};

/// Singular-value condition report of diag(sqrt(w)) D.
ConditionReport condition_report(const Eigen::MatrixXd& scaled_design);

/// Thrown when sigma_min < 1e-12 sigma_max; carries the computed report.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, ConditionReport report)
      : std::runtime_error(what), report_(report) {}
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

struct FitResult {
  Eigen::VectorXd coefficients;
  IndexSet index_set;
  BasisSpec basis;
  WeightScheme weights;
  double residual_norm = 0.0;  // sqrt(sum_i w_i (f_i - fit_i)^2)
  ConditionReport condition;
};

/// Weighted discrete least squares, minimising sum_i w_i (f_i - sum_j c_j Phi_j(y_i))^2
/// by Householder QR of the row-scaled design matrix.
FitResult solve(const Eigen::MatrixXd& pts, const Eigen::VectorXd& fvals, const IndexSet& lambda,
                const BasisSpec& spec, const WeightScheme& scheme);

inline FitResult solve(const SampleSet& pts, const Eigen::VectorXd& fvals, const IndexSet& lambda,
                       const BasisSpec& spec, const WeightScheme& scheme) {
  return solve(pts.points, fvals, lambda, spec, scheme);
}

/// As solve(), with an explicit nonnegative weight vector. The returned
/// FitResult records `scheme` as provenance.
FitResult solve_with_weights(const Eigen::MatrixXd& pts, const Eigen::VectorXd& fvals, const IndexSet& lambda,
                             const BasisSpec& spec, const Eigen::VectorXd& weights, const WeightScheme& scheme);

/// sum_j c_j Phi_j(y) at every row of `pts`.
Eigen::VectorXd evaluate_fit(const FitResult& fit, const Eigen::MatrixXd& pts);

/// A = D^T diag(w) D, accumulated directly from basis values. Diagnostic
/// only; the solver never forms it.
Eigen::MatrixXd gram(const Eigen::MatrixXd& pts, const IndexSet& lambda, const BasisSpec& spec,
                     const WeightScheme& scheme);

/// Rows "index,coefficient" with colon-joined index tuples.
void write_fit_csv(std::ostream& os, const FitResult& fit);
/// Header "cond_D,cond_A" and one row.
void write_condition_csv(std::ostream& os, const ConditionReport& report);

}  // namespace weil
