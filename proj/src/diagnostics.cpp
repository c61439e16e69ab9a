#include "weil/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "weil/csv.hpp"
#include "weil/errors.hpp"
#include "weil/point_gen.hpp"
#include "weil/primes.hpp"
#include "weil/quadrature.hpp"

namespace weil {

namespace {

constexpr double kSlack = 1e-9;

Eigen::MatrixXd weil_chebyshev_gram(std::uint64_t M, int d, const IndexSet& lambda) {
  const WeilGrid grid = weil_grid(M, d);
  return gram(grid.points(), lambda, BasisSpec(Family::Chebyshev, Normalization::Unnormalized), WeightScheme::unit());
}

// Visits every node of the d-fold tensor rule.
template <typename Visit>
void for_each_tensor_node(const QuadratureRule& rule, int d, Visit&& visit) {
  const auto n = rule.nodes.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      x[k] = rule.nodes[idx[k]];
      w *= rule.weights[idx[k]];
    }
    visit(std::span<const double>(x), w);
    std::size_t k = 0;
    for (; k < idx.size(); ++k) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
    if (k == idx.size()) return;
  }
}

QuadratureRule rule_for(Family f, int level) {
  return f == Family::Chebyshev ? gauss_chebyshev(level) : gauss_legendre(level);
}

}  // namespace

GramBoundReport check_gram_bounds(std::uint64_t M, int d, int q, const IndexSet& lambda, bool restrict_nonzero) {
  if (lambda.dim() != d) throw InvalidArgument("check_gram_bounds: index set dimension mismatch");
  if (q < 0 || M <= 2 * static_cast<std::uint64_t>(q) + 1) {
    throw PreconditionError("check_gram_bounds: need M > 2q + 1 (M = " + std::to_string(M) +
                            ", q = " + std::to_string(q) + ")");
  }
  if (lambda.max_degree() > q) throw PreconditionError("check_gram_bounds: index set exceeds degree q");
  if (!is_prime(M)) throw PreconditionError("check_gram_bounds: M must be prime");

  const Eigen::MatrixXd A = weil_chebyshev_gram(M, d, lambda);
  const double sqrt_m = std::sqrt(static_cast<double>(M));
  const double md = static_cast<double>(M);
  const double half_width = (d - 1) * sqrt_m / 2.0;

  GramBoundReport r;
  r.M = M;
  r.d = d;
  r.q = q;
  r.offdiag_bound = ((d - 1) * sqrt_m + 1.0) / 2.0;
  r.diag_lo = md / std::ldexp(1.0, d + 1) - half_width;
  r.diag_hi = md / std::ldexp(1.0, d + 1) + half_width;
  r.delta = std::ldexp(1.0, d) * ((d - 1) * sqrt_m + 1.0) / md;
  r.restricted_to_nonzero_indices = restrict_nonzero;
  r.diag_min = std::numeric_limits<double>::infinity();
  r.diag_max = -std::numeric_limits<double>::infinity();

  bool diag_ok = true;
  bool gen_ok = true;
  const auto n = static_cast<Eigen::Index>(lambda.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) r.max_offdiag_abs = std::max(r.max_offdiag_abs, std::abs(A(i, j)));
    }
    const auto& idx = lambda[static_cast<std::size_t>(i)];
    const double a = A(i, i);
    const int z = idx.nonzero_count();
    const double gen_dev = std::abs(a - md / std::ldexp(1.0, z + 1));
    r.max_generalized_deviation = std::max(r.max_generalized_deviation, gen_dev);
    gen_ok = gen_ok && gen_dev <= half_width + kSlack;
    if (z == d) {
      ++r.diag_checked;
      r.diag_min = std::min(r.diag_min, a);
      r.diag_max = std::max(r.diag_max, a);
      diag_ok = diag_ok && a >= r.diag_lo - kSlack && a <= r.diag_hi + kSlack;
    }
  }
  if (r.diag_checked == 0) {
    r.diag_min = std::numeric_limits<double>::quiet_NaN();
    r.diag_max = std::numeric_limits<double>::quiet_NaN();
  }
  r.generalized_pass = gen_ok;
  const bool offdiag_ok = r.max_offdiag_abs <= r.offdiag_bound + kSlack;
  r.pass = offdiag_ok && (restrict_nonzero ? diag_ok : gen_ok);
  return r;
}

void write_gram_report_csv_header(std::ostream& os) {
  os << "M,d,q,max_offdiag,offdiag_bound,diag_min,diag_max,pass\n";
}

void write_gram_report_csv_row(std::ostream& os, const GramBoundReport& r) {
  os << r.M << ',' << r.d << ',' << r.q << ',' << csv::format_double(r.max_offdiag_abs) << ','
     << csv::format_double(r.offdiag_bound) << ',' << csv::format_double(r.diag_min) << ','
     << csv::format_double(r.diag_max) << ',' << (r.pass ? "true" : "false") << '\n';
}

double spectral_gap(std::uint64_t M, int d, const IndexSet& lambda) {
  if (lambda.dim() != d) throw InvalidArgument("spectral_gap: index set dimension mismatch");
  for (const auto& idx : lambda) {
    if (idx.nonzero_count() != d) {
      throw InvalidArgument("spectral_gap: index " + idx.to_string() + " has a zero component");
    }
  }
  const Eigen::MatrixXd A = weil_chebyshev_gram(M, d, lambda);
  const auto n = A.rows();
  const Eigen::MatrixXd B = (std::ldexp(1.0, d + 1) / static_cast<double>(M)) * A - Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  return svd.singularValues()(0);
}

std::uint64_t stability_modulus_bound(int d, std::size_t n) {
  const std::uint64_t four_pow = std::uint64_t{1} << (2 * (d + 1));
  return four_pow * static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d) * n * n;
}

Eigen::VectorXd reference_projection(const TargetFunction& target, const IndexSet& lambda, const BasisSpec& spec,
                                     int level) {
  const int q = lambda.max_degree();
  if (2 * level - 1 < 2 * q + 1) {
    throw InvalidArgument("reference_projection: level " + std::to_string(level) +
                          " is not exact for degree 2q+1 = " + std::to_string(2 * q + 1));
  }
  const QuadratureRule rule = rule_for(spec.family(), level);
  const auto n = static_cast<Eigen::Index>(lambda.size());
  Eigen::VectorXd inner = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd norms = Eigen::VectorXd::Zero(n);
  for_each_tensor_node(rule, lambda.dim(), [&](std::span<const double> x, double w) {
    const double f = target(x);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double phi = eval_tensor(spec, lambda[static_cast<std::size_t>(j)], x);
      inner(j) += w * f * phi;
      norms(j) += w * phi * phi;
    }
  });
  return inner.cwiseQuotient(norms);
}

ErrorReport l2_error(const FitResult& fit, const TargetFunction& target, std::size_t n_test, std::uint64_t seed) {
  if (n_test < 1) throw InvalidArgument("l2_error: need at least one test point");
  const int d = fit.index_set.dim();
  const SampleSet test = mc_sample(McMeasure::Uniform, n_test, d, seed);
  const Eigen::VectorXd approx = evaluate_fit(fit, test.points);
  double sum = 0.0;
  std::vector<double> y(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < test.points.rows(); ++i) {
    for (int k = 0; k < d; ++k) y[static_cast<std::size_t>(k)] = test.points(i, k);
    const double e = target(y) - approx(i);
    sum += e * e;
  }
  ErrorReport r;
  r.q = fit.index_set.q();
  r.d = d;
  r.l2_error = std::sqrt(sum / static_cast<double>(n_test));
  r.test_count = n_test;
  r.test_seed = seed;
  return r;
}

void write_error_report_csv(std::ostream& os, std::span<const ErrorReport> reports) {
  os << "d,q,rule,c,m,M,l2_error\n";
  for (const auto& r : reports) {
    os << r.d << ',' << r.q << ',' << r.rule << ',' << csv::format_double(r.c) << ',' << r.m << ',' << r.M << ','
       << csv::format_double(r.l2_error) << '\n';
  }
}

double sup_deviation_estimate(const TargetFunction& f, const TargetFunction& g, int d, std::size_t n,
                              std::uint64_t seed) {
  const SampleSet s = mc_sample(McMeasure::Uniform, n, d, seed);
  std::vector<double> y(static_cast<std::size_t>(d));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.points.rows(); ++i) {
    for (int k = 0; k < d; ++k) y[static_cast<std::size_t>(k)] = s.points(i, k);
    worst = std::max(worst, std::abs(f(y) - g(y)));
  }
  return worst;
}

double projection_l2_error(const TargetFunction& target, const FitResult& fit, Family density, int level) {
  const QuadratureRule rule = rule_for(density, level);
  const int d = fit.index_set.dim();
  double sum = 0.0;
  for_each_tensor_node(rule, d, [&](std::span<const double> x, double w) {
    double approx = 0.0;
    for (std::size_t j = 0; j < fit.index_set.size(); ++j) {
      approx += fit.coefficients(static_cast<Eigen::Index>(j)) * eval_tensor(fit.basis, fit.index_set[j], x);
    }
    const double e = target(x) - approx;
    sum += w * e * e;
  });
  return std::sqrt(sum);
}

ConvergenceBoundReport check_convergence_bound(const TargetFunction& target, const FitResult& fit, int quad_level,
                                               std::size_t sup_samples, std::uint64_t seed) {
  const int d = fit.index_set.dim();
  const BasisSpec cheb(Family::Chebyshev, Normalization::Orthonormal);
  const Eigen::VectorXd best = reference_projection(target, fit.index_set, cheb, quad_level);
  const IndexSet lambda = fit.index_set;
  const TargetFunction best_fn = [&](std::span<const double> y) {
    double v = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) v += best(static_cast<Eigen::Index>(j)) * eval_tensor(cheb, lambda[j], y);
    return v;
  };

  ConvergenceBoundReport r;
  r.discrete_error_l2 = projection_l2_error(target, fit, Family::Chebyshev, quad_level);
  r.best_sup_estimate = sup_deviation_estimate(target, best_fn, d, sup_samples, seed);
  r.factor = 1.0 + 4.0 / (static_cast<double>(d) * d * static_cast<double>(lambda.size()));
  r.sup_samples = sup_samples;
  r.holds = r.discrete_error_l2 <= r.factor * r.best_sup_estimate;
  return r;
}

}  // namespace weil
