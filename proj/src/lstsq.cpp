#include "weil/lstsq.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "weil/csv.hpp"
#include "weil/errors.hpp"

namespace weil {

namespace {

constexpr double kSingularThreshold = 1e-12;

void check_points(const Eigen::MatrixXd& pts, const IndexSet& lambda) {
  if (pts.rows() == 0) throw InvalidArgument("empty point set");
  if (pts.cols() != lambda.dim()) {
    throw InvalidArgument("point dimension " + std::to_string(pts.cols()) + " does not match index set dimension " +
                          std::to_string(lambda.dim()));
  }
}

}  // namespace

std::string to_string(const WeightScheme& w) {
  if (w.kind == WeightScheme::Kind::Unit) return "unit";
  return w.target == TargetDensity::Uniform ? "density_ratio:uniform" : "density_ratio:chebyshev";
}

WeightScheme parse_weight_scheme(const std::string& s) {
  if (s == "unit") return WeightScheme::unit();
  if (s == "density_ratio" || s == "density_ratio:uniform") return WeightScheme::density_ratio(TargetDensity::Uniform);
  if (s == "density_ratio:chebyshev") return WeightScheme::density_ratio(TargetDensity::Chebyshev);
  throw InvalidArgument("unknown weight scheme '" + s + "'");
}

Eigen::VectorXd compute_weights(const WeightScheme& scheme, const Eigen::MatrixXd& pts) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(pts.rows());
  if (scheme.kind == WeightScheme::Kind::Unit || scheme.target == TargetDensity::Chebyshev) return w;

  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    double v = 1.0;
    for (Eigen::Index k = 0; k < pts.cols(); ++k) {
      const double y = pts(i, k);
      if (!(std::abs(y) <= 1.0)) throw DomainError("density-ratio weights need points in [-1, 1]^d");
      v *= 0.5 * std::numbers::pi * std::sqrt(1.0 - y * y);
    }
    w(i) = v;
  }
  return w;
}

ConditionReport condition_report(const Eigen::MatrixXd& scaled_design) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled_design);
  const auto& s = svd.singularValues();
  ConditionReport r;
  const double smax = s.size() ? s(0) : 0.0;
  const double smin = s.size() ? s(s.size() - 1) : 0.0;
  r.cond_D = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  r.cond_A = r.cond_D * r.cond_D;
  return r;
}

FitResult solve_with_weights(const Eigen::MatrixXd& pts, const Eigen::VectorXd& fvals, const IndexSet& lambda,
                             const BasisSpec& spec, const Eigen::VectorXd& weights, const WeightScheme& scheme) {
  check_points(pts, lambda);
  if (fvals.size() != pts.rows()) {
    throw InvalidArgument("value count " + std::to_string(fvals.size()) + " does not match point count " +
                          std::to_string(pts.rows()));
  }
  if (weights.size() != pts.rows()) throw InvalidArgument("weight count does not match point count");
  const auto n = static_cast<Eigen::Index>(lambda.size());
  if (pts.rows() < n) {
    throw InvalidArgument("under-determined system: " + std::to_string(pts.rows()) + " points for " +
                          std::to_string(n) + " basis functions");
  }
  if ((weights.array() < 0.0).any()) throw InvalidArgument("weights must be nonnegative");

  const Eigen::VectorXd sqrt_w = weights.array().sqrt();
  const Eigen::MatrixXd design = sqrt_w.asDiagonal() * basis_matrix(spec, lambda, pts);
  const Eigen::VectorXd rhs = sqrt_w.cwiseProduct(fvals);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  // diag(sqrt w) D = Q R, so R carries the same singular values.
  const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const ConditionReport report = condition_report(r);
  if (!(report.cond_D * kSingularThreshold < 1.0)) {
    throw SingularSystemError("rank-deficient least-squares system (cond_D = " + csv::format_double(report.cond_D) + ")",
                              report);
  }

  FitResult fit{qr.solve(rhs), lambda, spec, scheme, 0.0, report};
  fit.residual_norm = (rhs - design * fit.coefficients).norm();
  return fit;
}

FitResult solve(const Eigen::MatrixXd& pts, const Eigen::VectorXd& fvals, const IndexSet& lambda,
                const BasisSpec& spec, const WeightScheme& scheme) {
  check_points(pts, lambda);
  return solve_with_weights(pts, fvals, lambda, spec, compute_weights(scheme, pts), scheme);
}

Eigen::VectorXd evaluate_fit(const FitResult& fit, const Eigen::MatrixXd& pts) {
  check_points(pts, fit.index_set);
  return basis_matrix(fit.basis, fit.index_set, pts) * fit.coefficients;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& pts, const IndexSet& lambda, const BasisSpec& spec,
                     const WeightScheme& scheme) {
  check_points(pts, lambda);
  const Eigen::MatrixXd D = basis_matrix(spec, lambda, pts);
  const Eigen::VectorXd w = compute_weights(scheme, pts);
  const Eigen::Index n = D.cols();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < D.rows(); ++k) s += w(k) * D(k, i) * D(k, j);
      A(i, j) = s;
      A(j, i) = s;
    }
  }
  return A;
}

void write_fit_csv(std::ostream& os, const FitResult& fit) {
  os << "index,coefficient\n";
  for (std::size_t j = 0; j < fit.index_set.size(); ++j) {
    os << fit.index_set[j].to_string() << ',' << csv::format_double(fit.coefficients(static_cast<Eigen::Index>(j)))
       << '\n';
  }
}

void write_condition_csv(std::ostream& os, const ConditionReport& report) {
  os << "cond_D,cond_A\n" << csv::format_double(report.cond_D) << ',' << csv::format_double(report.cond_A) << '\n';
}

}  // namespace weil
