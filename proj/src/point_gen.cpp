#include "weil/point_gen.hpp"

#include <cmath>
#include <numbers>

#include "weil/csv.hpp"
#include "weil/errors.hpp"
#include "weil/primes.hpp"
#include "weil/random.hpp"

namespace weil {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Weil: return "weil";
    case Provenance::McChebyshev: return "mc_chebyshev";
    case Provenance::McUniform: return "mc_uniform";
  }
  return "?";
}

Provenance parse_provenance(const std::string& s) {
  if (s == "weil") return Provenance::Weil;
  if (s == "mc_chebyshev") return Provenance::McChebyshev;
  if (s == "mc_uniform") return Provenance::McUniform;
  throw InvalidArgument("unknown grid '" + s + "' (expected weil, mc_chebyshev or mc_uniform)");
}

WeilGrid weil_grid(std::uint64_t modulus, int d) {
  if (d < 1) throw InvalidArgument("weil_grid: dimension must be >= 1");
  if (!is_prime(modulus)) throw InvalidArgument("weil_grid: modulus " + std::to_string(modulus) + " is not prime");

  WeilGrid g;
  g.modulus_ = modulus;
  g.dim_ = d;
  const std::size_t rows = static_cast<std::size_t>(modulus / 2) + 1;
  const auto cols = static_cast<std::size_t>(d);
  g.residues_.resize(rows * cols);
  g.points_.resize(static_cast<Eigen::Index>(rows), d);

  const double scale = 2.0 * std::numbers::pi / static_cast<double>(modulus);
  for (std::size_t j = 0; j < rows; ++j) {
    const std::uint64_t base = j % modulus;
    std::uint64_t r = 1;
    for (std::size_t k = 0; k < cols; ++k) {
      r = mul_mod(r, base, modulus);
      g.residues_[j * cols + k] = r;
      g.points_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          std::cos(scale * static_cast<double>(r));
    }
  }
  return g;
}

SampleSet mc_sample(McMeasure measure, std::size_t n, int d, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("mc_sample: need at least one point");
  if (d < 1) throw InvalidArgument("mc_sample: dimension must be >= 1");
  SampleSet s;
  s.points.resize(static_cast<Eigen::Index>(n), d);
  s.provenance = measure == McMeasure::Chebyshev ? Provenance::McChebyshev : Provenance::McUniform;
  s.seed = seed;
  UniformStream rng(seed);
  for (Eigen::Index i = 0; i < s.points.rows(); ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double u = rng.next();
      s.points(i, k) = measure == McMeasure::Chebyshev ? std::cos(std::numbers::pi * u) : 2.0 * u - 1.0;
    }
  }
  return s;
}

std::complex<double> weil_exponential_sum(std::span<const std::int64_t> coeffs, std::uint64_t modulus) {
  if (!is_prime(modulus)) throw InvalidArgument("weil_exponential_sum: modulus must be prime");
  if (coeffs.empty()) throw PreconditionError("weil_exponential_sum: empty polynomial");

  const auto m = static_cast<std::int64_t>(modulus);
  std::vector<std::uint64_t> reduced;
  reduced.reserve(coeffs.size());
  bool any_nonzero = false;
  for (std::int64_t c : coeffs) {
    const std::int64_t r = ((c % m) + m) % m;
    reduced.push_back(static_cast<std::uint64_t>(r));
    any_nonzero = any_nonzero || r != 0;
  }
  if (!any_nonzero) {
    throw PreconditionError("weil_exponential_sum: every coefficient is divisible by M; the bound does not apply");
  }

  const double scale = 2.0 * std::numbers::pi / static_cast<double>(modulus);
  double re = 0.0;
  double im = 0.0;
  for (std::uint64_t j = 0; j < modulus; ++j) {
    // f(j) mod M by Horner: ((c_d j + c_{d-1}) j + ... + c_1) j
    std::uint64_t acc = 0;
    for (auto it = reduced.rbegin(); it != reduced.rend(); ++it) {
      acc = (acc + *it) % modulus;
      acc = mul_mod(acc, j, modulus);
    }
    const double angle = scale * static_cast<double>(acc);
    re += std::cos(angle);
    im += std::sin(angle);
  }
  return {re, im};
}

double equidist_box_fraction(const SampleSet& pts, std::span<const Interval> box) {
  if (pts.size() == 0) throw InvalidArgument("equidist_box_fraction: empty point set");
  if (box.size() != static_cast<std::size_t>(pts.dim())) throw InvalidArgument("box dimension mismatch");
  for (const auto& iv : box) {
    if (!(iv.lo <= iv.hi) || iv.lo < -1.0 || iv.hi > 1.0) {
      throw InvalidArgument("box intervals must satisfy -1 <= lo <= hi <= 1");
    }
  }
  std::size_t inside = 0;
  for (Eigen::Index i = 0; i < pts.points.rows(); ++i) {
    bool in = true;
    for (Eigen::Index k = 0; k < pts.points.cols() && in; ++k) {
      const double y = pts.points(i, k);
      const auto& iv = box[static_cast<std::size_t>(k)];
      in = y >= iv.lo && y <= iv.hi;
    }
    inside += in ? 1 : 0;
  }
  return static_cast<double>(inside) / static_cast<double>(pts.size());
}

double arcsine_box_measure(std::span<const Interval> box) {
  double p = 1.0;
  for (const auto& iv : box) {
    if (!(iv.lo <= iv.hi) || iv.lo < -1.0 || iv.hi > 1.0) {
      throw InvalidArgument("box intervals must satisfy -1 <= lo <= hi <= 1");
    }
    p *= (std::asin(iv.hi) - std::asin(iv.lo)) / std::numbers::pi;
  }
  return p;
}

void write_points_csv(std::ostream& os, const SampleSet& pts) {
  os << 'j';
  for (int k = 1; k <= pts.dim(); ++k) os << ",y" << k;
  os << '\n';
  for (Eigen::Index i = 0; i < pts.points.rows(); ++i) {
    os << i;
    for (Eigen::Index k = 0; k < pts.points.cols(); ++k) os << ',' << csv::format_double(pts.points(i, k));
    os << '\n';
  }
}

}  // namespace weil
