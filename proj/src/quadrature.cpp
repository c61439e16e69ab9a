#include "weil/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "weil/errors.hpp"

namespace weil {

QuadratureRule gauss_chebyshev(int n) {
  if (n < 1) throw InvalidArgument("quadrature needs at least one node");
  QuadratureRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
  for (int k = 0; k < n; ++k) {
    r.nodes[static_cast<std::size_t>(k)] = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
  }
  return r;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("quadrature needs at least one node");
  QuadratureRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  // Newton iteration on P_n from the Chebyshev-like initial guess; the roots
  // are symmetric so only half are computed.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Weight for the probability density (1/2 dx): 1 / ((1 - x^2) P_n'(x)^2).
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = -x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

}  // namespace weil
