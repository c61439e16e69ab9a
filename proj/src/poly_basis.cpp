#include "weil/poly_basis.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "weil/errors.hpp"

namespace weil {

std::string to_string(Family f) { return f == Family::Chebyshev ? "chebyshev" : "legendre"; }

std::string to_string(Normalization n) { return n == Normalization::Unnormalized ? "unnormalized" : "orthonormal"; }

Family parse_family(const std::string& s) {
  if (s == "chebyshev") return Family::Chebyshev;
  if (s == "legendre") return Family::Legendre;
  throw InvalidArgument("unknown basis family '" + s + "' (expected chebyshev or legendre)");
}

Normalization parse_normalization(const std::string& s) {
  if (s == "unnormalized") return Normalization::Unnormalized;
  if (s == "orthonormal") return Normalization::Orthonormal;
  throw InvalidArgument("unknown normalization '" + s + "' (expected unnormalized or orthonormal)");
}

BasisSpec::BasisSpec(Family family, Normalization normalization) : family_(family), normalization_(normalization) {
  if (family == Family::Legendre && normalization == Normalization::Unnormalized) {
    throw InvalidArgument("the unnormalized convention is defined for the Chebyshev family only");
  }
}

namespace {

double chebyshev(Normalization norm, int n, double y) {
  const double c = std::cos(static_cast<double>(n) * std::acos(y));
  return (norm == Normalization::Orthonormal && n > 0) ? std::numbers::sqrt2 * c : c;
}

// P_{k+1} = ((2k+1) y P_k - k P_{k-1}) / (k+1), scaled by sqrt(2n+1) at the end.
double legendre(int n, double y) {
  double prev = 1.0;
  double cur = y;
  if (n == 0) return 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * y * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return std::sqrt(2.0 * n + 1.0) * cur;
}

}  // namespace

double eval_1d(Family family, Normalization normalization, int n, double y) {
  if (n < 0) throw InvalidArgument("polynomial degree must be >= 0");
  if (!(std::abs(y) <= 1.0)) throw DomainError("basis evaluation outside [-1, 1]");
  if (family == Family::Chebyshev) return chebyshev(normalization, n, y);
  return legendre(n, y);
}

double eval_tensor(const BasisSpec& spec, const MultiIndex& n, std::span<const double> y) {
  if (n.dim() != y.size()) throw InvalidArgument("eval_tensor: dimension mismatch");
  double v = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) v *= eval_1d(spec.family(), spec.normalization(), n[i], y[i]);
  return v;
}

Eigen::MatrixXd basis_matrix(const BasisSpec& spec, const IndexSet& lambda, const Eigen::MatrixXd& pts) {
  if (lambda.size() == 0) throw InvalidArgument("basis_matrix: empty index set");
  if (pts.rows() == 0) throw InvalidArgument("basis_matrix: empty point set");
  if (pts.cols() != lambda.dim()) throw InvalidArgument("basis_matrix: dimension mismatch");

  const int d = lambda.dim();
  const int q = lambda.max_degree();
  const auto stride = static_cast<std::size_t>(q + 1);
  Eigen::MatrixXd D(pts.rows(), static_cast<Eigen::Index>(lambda.size()));
  std::vector<double> table(static_cast<std::size_t>(d) * stride);

  for (Eigen::Index k = 0; k < pts.rows(); ++k) {
    for (int i = 0; i < d; ++i) {
      for (int n = 0; n <= q; ++n) {
        table[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(n)] =
            eval_1d(spec.family(), spec.normalization(), n, pts(k, i));
      }
    }
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      const auto& idx = lambda[j];
      double v = 1.0;
      for (int i = 0; i < d; ++i) {
        v *= table[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      }
      D(k, static_cast<Eigen::Index>(j)) = v;
    }
  }
  return D;
}

}  // namespace weil
