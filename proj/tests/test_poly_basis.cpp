#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "weil/errors.hpp"
#include "weil/point_gen.hpp"
#include "weil/poly_basis.hpp"
#include "weil/quadrature.hpp"
#include "weil/random.hpp"

using weil::BasisSpec;
using weil::Family;
using weil::IndexSet;
using weil::IndexSetKind;
using weil::MultiIndex;
using weil::Normalization;

namespace {

// T_n by the three-term recurrence.
double chebyshev_recurrence(int n, double y) {
  double a = 1.0, b = y;
  if (n == 0) return a;
  for (int k = 1; k < n; ++k) {
    const double c = 2.0 * y * b - a;
    a = b;
    b = c;
  }
  return b;
}

// Unnormalised Legendre polynomials in monomial form.
double legendre_monomial(int n, double y) {
  switch (n) {
    case 0: return 1.0;
    case 1: return y;
    case 2: return (3 * y * y - 1) / 2;
    case 3: return (5 * y * y * y - 3 * y) / 2;
    case 4: return (35 * std::pow(y, 4) - 30 * y * y + 3) / 8;
    case 5: return (63 * std::pow(y, 5) - 70 * std::pow(y, 3) + 15 * y) / 8;
  }
  return NAN;
}

}  // namespace

TEST(Eval1d, Examples) {
  EXPECT_NEAR(weil::eval_1d(Family::Chebyshev, Normalization::Unnormalized, 2, 0.5), -0.5, 1e-15);
  EXPECT_EQ(weil::eval_1d(Family::Chebyshev, Normalization::Orthonormal, 0, 0.37), 1.0);
  EXPECT_NEAR(weil::eval_1d(Family::Legendre, Normalization::Orthonormal, 1, 1.0), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(weil::eval_1d(Family::Chebyshev, Normalization::Orthonormal, 3, 0.2),
              std::sqrt(2.0) * std::cos(3 * std::acos(0.2)), 1e-15);
}

TEST(Eval1d, Errors) {
  EXPECT_THROW(weil::eval_1d(Family::Chebyshev, Normalization::Unnormalized, 1, 1.0000001), weil::DomainError);
  EXPECT_THROW(weil::eval_1d(Family::Legendre, Normalization::Orthonormal, 1, -1.5), weil::DomainError);
  EXPECT_THROW(weil::eval_1d(Family::Chebyshev, Normalization::Unnormalized, -1, 0.0), weil::InvalidArgument);
  EXPECT_THROW(weil::eval_1d(Family::Chebyshev, Normalization::Unnormalized, 1, NAN), weil::DomainError);
  EXPECT_THROW(BasisSpec(Family::Legendre, Normalization::Unnormalized), weil::InvalidArgument);
}

TEST(Eval1dProperty, ChebyshevCosineIdentity) {
  for (int n = 0; n <= 50; ++n) {
    for (int k = 0; k < 1000; ++k) {
      const double theta = std::numbers::pi * k / 999.0;
      ASSERT_NEAR(weil::eval_1d(Family::Chebyshev, Normalization::Unnormalized, n, std::cos(theta)), std::cos(n * theta),
                  1e-12)
          << "n=" << n << " theta=" << theta;
    }
  }
}

TEST(Eval1dProperty, ChebyshevMatchesRecurrence) {
  weil::UniformStream rng(3);
  for (int t = 0; t < 500; ++t) {
    const double y = 2 * rng.next() - 1;
    for (int n = 0; n <= 20; ++n) {
      ASSERT_NEAR(weil::eval_1d(Family::Chebyshev, Normalization::Unnormalized, n, y), chebyshev_recurrence(n, y), 1e-12);
    }
  }
}

TEST(Eval1dProperty, LegendreMatchesMonomialForm) {
  weil::UniformStream rng(4);
  for (int t = 0; t < 64; ++t) {
    const double y = 2 * rng.next() - 1;
    for (int n = 0; n <= 5; ++n) {
      EXPECT_NEAR(weil::eval_1d(Family::Legendre, Normalization::Orthonormal, n, y),
                  std::sqrt(2.0 * n + 1) * legendre_monomial(n, y), 1e-12);
    }
  }
}

TEST(Eval1dProperty, LegendreMaxNormBound) {
  for (int n = 0; n <= 50; ++n) {
    const double bound = std::sqrt(2.0 * n + 1);
    for (int k = 0; k <= 2000; ++k) {
      const double y = -1.0 + k / 1000.0;
      ASSERT_LE(std::abs(weil::eval_1d(Family::Legendre, Normalization::Orthonormal, n, y)), bound * (1 + 1e-12));
    }
    EXPECT_NEAR(weil::eval_1d(Family::Legendre, Normalization::Orthonormal, n, 1.0), bound, 1e-12 * bound);
  }
}

TEST(Quadrature, GaussLegendreSmallRules) {
  const auto r2 = weil::gauss_legendre(2);
  EXPECT_NEAR(std::abs(r2.nodes[0]), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r2.weights[0], 0.5, 1e-15);
  const auto r3 = weil::gauss_legendre(3);
  double w_centre = 0, w_outer = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (std::abs(r3.nodes[i]) < 1e-14) w_centre = r3.weights[i];
    else w_outer = r3.weights[i];
  }
  EXPECT_NEAR(w_centre, 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(w_outer, 5.0 / 18.0, 1e-15);
}

TEST(Quadrature, ExactForMonomials) {
  const auto gl = weil::gauss_legendre(20);
  const auto gc = weil::gauss_chebyshev(20);
  for (int k = 0; k <= 39; ++k) {
    double sl = 0, sc = 0;
    for (std::size_t i = 0; i < 20; ++i) {
      sl += gl.weights[i] * std::pow(gl.nodes[i], k);
      sc += gc.weights[i] * std::pow(gc.nodes[i], k);
    }
    // uniform probability moments 1/(k+1); arcsine moments C(k, k/2) / 2^k
    const double ul = k % 2 ? 0.0 : 1.0 / (k + 1);
    double uc = 0.0;
    if (k % 2 == 0) {
      uc = 1.0;
      for (int j = 1; j <= k / 2; ++j) uc *= static_cast<double>(k / 2 + j) / j / 4.0;
    }
    EXPECT_NEAR(sl, ul, 1e-14) << k;
    EXPECT_NEAR(sc, uc, 1e-14) << k;
  }
}

TEST(Eval1dProperty, OrthonormalUnderNaturalDensity) {
  for (auto fam : {Family::Chebyshev, Family::Legendre}) {
    const auto rule = fam == Family::Chebyshev ? weil::gauss_chebyshev(40) : weil::gauss_legendre(40);
    for (int a = 0; a <= 10; ++a) {
      for (int b = 0; b <= 10; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          s += rule.weights[i] * weil::eval_1d(fam, Normalization::Orthonormal, a, rule.nodes[i]) *
               weil::eval_1d(fam, Normalization::Orthonormal, b, rule.nodes[i]);
        }
        EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-10) << weil::to_string(fam) << " a=" << a << " b=" << b;
      }
    }
  }
}

TEST(EvalTensor, Examples) {
  const BasisSpec cosine(Family::Chebyshev, Normalization::Unnormalized);
  const std::vector<double> y = {0.5, 0.5};
  EXPECT_NEAR(weil::eval_tensor(cosine, {2, 2}, y), 0.25, 1e-15);
  EXPECT_EQ(weil::eval_tensor(cosine, {0, 0, 0}, std::vector<double>{-0.3, 0.9, 1.0}), 1.0);
  EXPECT_THROW(weil::eval_tensor(cosine, {1, 1}, std::vector<double>{0.1}), weil::InvalidArgument);
}

TEST(EvalTensorProperty, FactorisesExactly) {
  const BasisSpec leg(Family::Legendre, Normalization::Orthonormal);
  weil::UniformStream rng(8);
  for (int t = 0; t < 64; ++t) {
    const std::vector<double> y = {2 * rng.next() - 1, 2 * rng.next() - 1};
    const double expect = weil::eval_1d(Family::Legendre, Normalization::Orthonormal, 1, y[0]) *
                          weil::eval_1d(Family::Legendre, Normalization::Orthonormal, 2, y[1]);
    EXPECT_EQ(weil::eval_tensor(leg, {1, 2}, y), expect);
    EXPECT_NEAR(expect, std::sqrt(3.0) * y[0] * std::sqrt(5.0) * legendre_monomial(2, y[1]), 1e-12);
  }
}

TEST(BasisMatrix, Examples) {
  const BasisSpec cosine(Family::Chebyshev, Normalization::Unnormalized);
  Eigen::MatrixXd pts(3, 1);
  pts << -1, 0, 1;
  const auto D = weil::basis_matrix(cosine, IndexSet::build(IndexSetKind::TotalDegree, 1, 1), pts);
  Eigen::MatrixXd expect(3, 2);
  expect << 1, -1, 1, 0, 1, 1;
  EXPECT_LT((D - expect).cwiseAbs().maxCoeff(), 1e-15);

  const auto ones = weil::basis_matrix(cosine, IndexSet::build(IndexSetKind::TotalDegree, 0, 2),
                                       Eigen::MatrixXd::Constant(5, 2, 0.3));
  EXPECT_EQ(ones, Eigen::MatrixXd::Ones(5, 1));
}

TEST(BasisMatrix, MatchesBruteForceOnWeilGrid) {
  const auto lambda = IndexSet::build(IndexSetKind::TotalDegree, 2, 2);
  const auto grid = weil::weil_grid(11, 2);
  for (auto norm : {Normalization::Unnormalized, Normalization::Orthonormal}) {
    const BasisSpec spec(Family::Chebyshev, norm);
    const auto D = weil::basis_matrix(spec, lambda, grid.samples());
    ASSERT_EQ(D.rows(), 6);
    ASSERT_EQ(D.cols(), 6);
    for (Eigen::Index k = 0; k < D.rows(); ++k) {
      for (std::size_t j = 0; j < lambda.size(); ++j) {
        double v = 1.0;
        for (int c = 0; c < 2; ++c) {
          const int n = lambda[j][static_cast<std::size_t>(c)];
          const double scale = (norm == Normalization::Orthonormal && n > 0) ? std::sqrt(2.0) : 1.0;
          v *= scale * std::cos(n * 2 * std::numbers::pi * static_cast<double>(grid.residue(k, c + 1)) / 11.0);
        }
        EXPECT_NEAR(D(k, static_cast<Eigen::Index>(j)), v, 1e-12);
      }
    }
  }
}

TEST(BasisMatrix, Errors) {
  const BasisSpec cosine(Family::Chebyshev, Normalization::Unnormalized);
  const auto lambda = IndexSet::build(IndexSetKind::TotalDegree, 1, 2);
  EXPECT_THROW(weil::basis_matrix(cosine, lambda, Eigen::MatrixXd(0, 2)), weil::InvalidArgument);
  EXPECT_THROW(weil::basis_matrix(cosine, lambda, Eigen::MatrixXd::Zero(3, 3)), weil::InvalidArgument);
  EXPECT_THROW(weil::basis_matrix(cosine, lambda, Eigen::MatrixXd::Constant(3, 2, 2.0)), weil::DomainError);
}

TEST(BasisSpec, ParseRoundTrip) {
  EXPECT_EQ(weil::parse_family("legendre"), Family::Legendre);
  EXPECT_EQ(weil::parse_normalization("unnormalized"), Normalization::Unnormalized);
  EXPECT_EQ(weil::to_string(Normalization::Orthonormal), "orthonormal");
  EXPECT_THROW(weil::parse_family("hermite"), weil::InvalidArgument);
}
