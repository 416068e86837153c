#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "stoich/corpus.hpp"
#include "stoich/lattice.hpp"

using namespace stoich;
using namespace stoich::lattice;

namespace {

Vector pt(long x, long y) { return {Rational(x), Rational(y)}; }

}  // namespace

TEST(Lattice, UnitSquare) {
  auto sq = Polytope::from_points(2, {pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)});
  for (long n = 0; n <= 5; ++n) {
    auto c = denominator_bounded_count(sq, n);
    if (n == 0) continue;
    EXPECT_EQ(c.all, (n + 1) * (n + 1));
    EXPECT_EQ(c.interior, (n - 1) * (n - 1));
  }
  auto fit = fit_count_polynomial(sq, false);
  EXPECT_EQ(fit.polynomial.to_string(), "n^2 + 2n + 1");
  EXPECT_TRUE(fit.reciprocity_holds);
  EXPECT_EQ(fit_count_polynomial(sq, true).polynomial.to_string(), "n^2 - 2n + 1");
}

TEST(Lattice, SegmentAndPoint) {
  auto seg = Polytope::from_points(2, {pt(0, 0), pt(2, 1)});
  auto fit = fit_count_polynomial(seg, false);
  EXPECT_EQ(fit.degree, 1);
  EXPECT_EQ(fit.polynomial.to_string(), "n + 1");
  EXPECT_TRUE(fit.reciprocity_holds);
  auto p = Polytope::from_points(2, {pt(3, 4)});
  EXPECT_EQ(fit_count_polynomial(p, false).polynomial.to_string(), "1");
}

TEST(Lattice, RefusesNonIntegralVertices) {
  auto tri = Polytope::from_points(2, {pt(0, 0), Vector{rational(1, 2), Rational(0)}, pt(0, 1)});
  EXPECT_THROW(fit_count_polynomial(tri, false), Error);
  EXPECT_EQ(denominator_bounded_count(tri, 2).all, 4);
}

TEST(Lattice, Interpolate) {
  auto p = interpolate({{Rational(1), Rational(2)}, {Rational(2), Rational(9)}, {Rational(3), Rational(22)}});
  EXPECT_EQ(p.to_string(), "3n^2 - 2n + 1");
  EXPECT_EQ(p(Rational(-1)), 6);
  Polynomial q{{rational(1, 2), Rational(-1)}};
  EXPECT_EQ(q.to_string("t"), "-t + 1/2");
}

TEST(Lattice, ScaledQuadrilateralAllPoints) {
  auto q = corpus::data::scaled_quadrilateral();
  EXPECT_EQ(q.dim(), 2);
  auto fit = fit_count_polynomial(q, false);
  EXPECT_TRUE(fit.reciprocity_holds);
  for (const auto& [n, v] : fit.validations) EXPECT_EQ(fit.polynomial(Rational(n)), Rational(v));
}

// Pick: A = I + B/2 - 1, and for nP the area scales by n^2 and boundary by n.
TEST(Property, PickOnRandomTriangles) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> c(-6, 6);
  int done = 0;
  while (done < 60) {
    long x[3], y[3];
    for (int i = 0; i < 3; ++i) x[i] = c(rng), y[i] = c(rng);
    long twice_area = std::labs((x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]));
    if (twice_area == 0) continue;
    ++done;
    long b = 0;
    for (int i = 0; i < 3; ++i) b += std::gcd(std::labs(x[(i + 1) % 3] - x[i]), std::labs(y[(i + 1) % 3] - y[i]));
    auto tri = Polytope::from_points(2, {pt(x[0], y[0]), pt(x[1], y[1]), pt(x[2], y[2])});
    for (long n = 1; n <= 3; ++n) {
      auto cnt = denominator_bounded_count(tri, n);
      // 2I = 2A - B + 2, total = I + B.
      long a2 = twice_area * n * n, bn = b * n;
      long inner = (a2 - bn + 2) / 2;
      EXPECT_EQ(cnt.interior, inner);
      EXPECT_EQ(cnt.all, inner + bn);
    }
    auto fit = fit_count_polynomial(tri, false);
    EXPECT_EQ(fit.polynomial.coefficients.at(2), rational(twice_area, 2));
    EXPECT_TRUE(fit.reciprocity_holds);
  }
}
