#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "weil/index_set.hpp"
#include "weil/lstsq.hpp"
#include "weil/poly_basis.hpp"

namespace weil {

using TargetFunction = std::function<double(std::span<const double>)>;

/// Gram entries of the unnormalised Chebyshev basis on a Weil grid compared
/// with the exponential-sum bounds:
///   |A_nk| <= ((d-1) sqrt(M) + 1) / 2                       for n != k
///   |A_nn - M / 2^{d+1}| <= (d-1) sqrt(M) / 2               (all-nonzero n)
///   |A_nn - M / 2^{z(n)+1}| <= (d-1) sqrt(M) / 2            (generalised, z = nonzero count)
struct GramBoundReport {
  std::uint64_t M = 0;
  int d = 0;
  int q = 0;
  double max_offdiag_abs = 0.0;
  double offdiag_bound = 0.0;
  // Over the all-nonzero-component indices; NaN when there are none.
  double diag_min = 0.0;
  double diag_max = 0.0;
  double diag_lo = 0.0;
  double diag_hi = 0.0;
  std::size_t diag_checked = 0;
  // Largest |A_nn - M / 2^{z(n)+1}| over every index, and its pass flag.
  double max_generalized_deviation = 0.0;
  bool generalized_pass = false;
  double delta = 0.0;  // 2^d ((d-1) sqrt(M) + 1) / M
  bool restricted_to_nonzero_indices = false;
  bool pass = false;
};

/// Fp comparisons use an absolute slack of 1e-9. `pass` is the off-diagonal
/// check combined with the printed diagonal band over all-nonzero indices
/// when `restrict_nonzero` is set, or with the generalised band over every
/// index otherwise. Throws PreconditionError unless M > 2q + 1 and Lambda has
/// degree <= q.
GramBoundReport check_gram_bounds(std::uint64_t M, int d, int q, const IndexSet& lambda, bool restrict_nonzero);

void write_gram_report_csv_header(std::ostream& os);
void write_gram_report_csv_row(std::ostream& os, const GramBoundReport& r);

/// Spectral norm || (2^{d+1} / M) A - I ||_2 for the unnormalised Chebyshev
/// Gram on the Weil grid. Every index must have all components nonzero.
double spectral_gap(std::uint64_t M, int d, const IndexSet& lambda);

/// 4^{d+1} d^2 N^2, the grid size above which the normalised Gram is
/// guaranteed within 1/2 of the identity.
std::uint64_t stability_modulus_bound(int d, std::size_t n);

/// Coefficients of the orthogonal projection onto span{Phi_n : n in Lambda}
/// under the basis' natural density, evaluated with a tensor Gauss rule of
/// `level` nodes per coordinate (Gauss-Chebyshev or Gauss-Legendre). Throws
/// InvalidArgument unless 2 level - 1 >= 2 q + 1, q the largest degree in Lambda.
Eigen::VectorXd reference_projection(const TargetFunction& target, const IndexSet& lambda, const BasisSpec& spec,
                                     int level);

struct ErrorReport {
  int q = 0;
  int d = 0;
  std::string rule;  // "linear" or "quadratic"; filled in by study drivers
  double c = 0.0;
  std::size_t m = 0;
  std::uint64_t M = 0;
  double l2_error = 0.0;
  std::size_t test_count = 0;
  std::uint64_t test_seed = 0;
};

/// Root-mean-square error over n_test seeded uniform points on [-1,1]^d.
ErrorReport l2_error(const FitResult& fit, const TargetFunction& target, std::size_t n_test, std::uint64_t seed);

void write_error_report_csv(std::ostream& os, std::span<const ErrorReport> reports);

/// Largest |f - g| over n seeded uniform points; a lower bound on the sup norm.
double sup_deviation_estimate(const TargetFunction& f, const TargetFunction& g, int d, std::size_t n,
                              std::uint64_t seed);

/// ||f - P_m f||_{L2(rho_c)} <= (1 + 4 / (d^2 N)) ||f - P f||_inf, with the
/// left side by tensor Gauss-Chebyshev quadrature and the sup norm estimated
/// from a seeded uniform sample. The estimate can only understate the right
/// side, so a failure here is conclusive while a pass is not.
struct ConvergenceBoundReport {
  double discrete_error_l2 = 0.0;  // ||f - P_m f||_{L2(rho_c)}
  double best_sup_estimate = 0.0;  // ||f - P f||_inf estimate
  double factor = 0.0;             // 1 + 4 / (d^2 N)
  std::size_t sup_samples = 0;
  bool holds = false;
};

ConvergenceBoundReport check_convergence_bound(const TargetFunction& target, const FitResult& fit, int quad_level,
                                               std::size_t sup_samples, std::uint64_t seed);

/// L2 norm under the basis' natural density of f - fit, by tensor Gauss rule.
double projection_l2_error(const TargetFunction& target, const FitResult& fit, Family density, int level);

}  // namespace weil
