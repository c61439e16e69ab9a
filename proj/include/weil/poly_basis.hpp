#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "weil/index_set.hpp"
#include "weil/point_gen.hpp"

namespace weil {

enum class Family { Chebyshev, Legendre };

// Unnormalized: cos(n arccos y) (Chebyshev only).
// Orthonormal: unit norm under the family's probability density, i.e. the
// normalised arcsine density for Chebyshev and the uniform density on [-1,1]
// for Legendre.
enum class Normalization { Unnormalized, Orthonormal };

std::string to_string(Family f);
std::string to_string(Normalization n);
Family parse_family(const std::string& s);
Normalization parse_normalization(const std::string& s);

class BasisSpec {
 public:
  /// Throws InvalidArgument for Legendre with Unnormalized.
  BasisSpec(Family family, Normalization normalization);

  Family family() const { return family_; }
  Normalization normalization() const { return normalization_; }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

 private:
  Family family_;
  Normalization normalization_;
};

/// Univariate basis value. Throws DomainError when |y| > 1 and
/// InvalidArgument when n < 0.
double eval_1d(Family family, Normalization normalization, int n, double y);

/// Tensor product of eval_1d over coordinates, multiplied left to right.
double eval_tensor(const BasisSpec& spec, const MultiIndex& n, std::span<const double> y);

/// Design matrix D with D(k, j) = Phi_j(y_k), columns in index-set order.
/// Entries are bit-identical to eval_tensor.
Eigen::MatrixXd basis_matrix(const BasisSpec& spec, const IndexSet& lambda, const Eigen::MatrixXd& pts);

inline Eigen::MatrixXd basis_matrix(const BasisSpec& spec, const IndexSet& lambda, const SampleSet& pts) {
  return basis_matrix(spec, lambda, pts.points);
}

}  // namespace weil
