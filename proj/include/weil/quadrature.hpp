#pragma once

#include <vector>

namespace weil {

/// A univariate rule whose weights sum to one (probability normalisation).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Chebyshev rule for the normalised arcsine density; exact
/// for polynomials of degree <= 2n - 1.
QuadratureRule gauss_chebyshev(int n);

/// n-point Gauss-Legendre rule for the uniform probability density on
/// [-1, 1]; exact for polynomials of degree <= 2n - 1.
QuadratureRule gauss_legendre(int n);

}  // namespace weil
