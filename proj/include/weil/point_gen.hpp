#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace weil {

enum class Provenance { Weil, McChebyshev, McUniform };

std::string to_string(Provenance p);
Provenance parse_provenance(const std::string& s);

/// A point cloud in [-1, 1]^d, one point per row.
struct SampleSet {
  Eigen::MatrixXd points;
  Provenance provenance = Provenance::Weil;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

/// The deterministic set y_j = cos(2 pi (j, j^2, ..., j^d) / M), j = 0..floor(M/2).
class WeilGrid {
 public:
  std::uint64_t modulus() const { return modulus_; }
  int dim() const { return dim_; }
  /// floor(M/2); the grid has half_size() + 1 rows.
  std::uint64_t half_size() const { return modulus_ / 2; }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }

  /// j^k mod M for row j and exponent k = 1..d (column k-1).
  std::uint64_t residue(std::size_t j, int k) const {
    return residues_[j * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(k - 1)];
  }
  const Eigen::MatrixXd& points() const { return points_; }

  SampleSet samples() const { return SampleSet{points_, Provenance::Weil, std::nullopt}; }

 private:
  friend WeilGrid weil_grid(std::uint64_t modulus, int d);

  std::uint64_t modulus_ = 0;
  int dim_ = 0;
  std::vector<std::uint64_t> residues_;
  Eigen::MatrixXd points_;
};

/// Builds the grid for a prime modulus. Residues come from exact iterated
/// modular multiplication. Throws InvalidArgument for composite M or d < 1.
WeilGrid weil_grid(std::uint64_t modulus, int d);

enum class McMeasure { Chebyshev, Uniform };

/// Seeded Monte Carlo sample. Chebyshev coordinates are cos(pi U), uniform
/// coordinates are 2U - 1, with U drawn from UniformStream(seed) in row-major
/// order (point by point, coordinate by coordinate).
SampleSet mc_sample(McMeasure measure, std::size_t n, int d, std::uint64_t seed);

/// sum_{j=0}^{M-1} exp(2 pi i f(j) / M) with f(x) = c_1 x + ... + c_d x^d,
/// evaluated with f(j) reduced exactly mod M. Throws PreconditionError when
/// every coefficient is divisible by M.
std::complex<double> weil_exponential_sum(std::span<const std::int64_t> coeffs, std::uint64_t modulus);

struct Interval {
  double lo;
  double hi;
};

/// Fraction of points inside the closed box.
double equidist_box_fraction(const SampleSet& pts, std::span<const Interval> box);

/// Product arcsine probability of the box: prod_k (asin(b_k) - asin(a_k)) / pi.
double arcsine_box_measure(std::span<const Interval> box);

/// CSV dump: header "j,y1,...,yd", 17 significant digits.
void write_points_csv(std::ostream& os, const SampleSet& pts);

}  // namespace weil
