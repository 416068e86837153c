#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "stoich/dd.hpp"
#include "stoich/geometry.hpp"
#include "stoich/lp.hpp"

using namespace stoich;
using namespace stoich::geometry;
using ratlin::Matrix;

namespace {

Vector pt(long x, long y) { return {Rational(x), Rational(y)}; }

Rational cross(const Vector& o, const Vector& a, const Vector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
std::vector<Vector> hull2d(std::vector<Vector> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<Vector> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && sgn(cross(h[k - 2], h[k - 1], p[i])) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && sgn(cross(h[k - 2], h[k - 1], p[i])) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

// Sutherland-Hodgman clipping of a convex polygon by a counter-clockwise convex polygon.
std::vector<Vector> clip(std::vector<Vector> subject, const std::vector<Vector>& window) {
  for (std::size_t e = 0; e < window.size() && !subject.empty(); ++e) {
    const Vector& a = window[e];
    const Vector& b = window[(e + 1) % window.size()];
    std::vector<Vector> out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Vector& p = subject[i];
      const Vector& q = subject[(i + 1) % subject.size()];
      Rational cp = cross(a, b, p), cq = cross(a, b, q);
      if (sgn(cp) >= 0) out.push_back(p);
      if ((sgn(cp) > 0 && sgn(cq) < 0) || (sgn(cp) < 0 && sgn(cq) > 0)) {
        Rational t = cp / (cp - cq);
        out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
      }
    }
    subject = out;
  }
  return subject;
}

std::vector<Vector> sorted(std::vector<Vector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(LP, NonnegativeSolution) {
  Matrix a{{1, 1, 0}, {0, 1, 1}};
  auto x = lp::nonnegative_solution(a, {Rational(2), Rational(3)});
  ASSERT_TRUE(x);
  for (const auto& v : *x) EXPECT_GE(sgn(v), 0);
  EXPECT_EQ(a * *x, (Vector{2, 3}));
  EXPECT_FALSE(lp::nonnegative_solution(Matrix{{1, 1}}, {Rational(-1)}));
  EXPECT_FALSE(lp::nonnegative_solution(Matrix{{1, -1}, {1, -1}}, {Rational(1), Rational(2)}));
}

TEST(LP, StrictlyPositiveDirection) {
  Matrix a{{1, 0}, {0, 1}, {1, 1}};
  auto y = lp::strictly_positive_direction(a);
  ASSERT_TRUE(y);
  for (const auto& v : a * *y) EXPECT_GE(v, 1);
  EXPECT_FALSE(lp::strictly_positive_direction(Matrix{{1}, {-1}}));
}

TEST(DoubleDescription, OrthantAndSlices) {
  auto g = dd::generators(3, {}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_TRUE(g.lineality.empty());
  EXPECT_EQ(g.rays.size(), 3u);
  auto h = dd::generators(3, {{1, -1, 0}}, {{1, 0, 0}, {0, 0, 1}});
  EXPECT_EQ(h.rays.size(), 2u);
  EXPECT_EQ(h.dim(3), 2u);
  auto line = dd::generators(2, {}, {{1, 0}});
  EXPECT_EQ(line.dim(2), 2u);
}

TEST(Polytope, SquareRepresentation) {
  auto p = Polytope::from_points(2, {pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1), {rational(1, 2), rational(1, 2)}});
  EXPECT_EQ(p.dim(), 2);
  EXPECT_EQ(p.vertices().size(), 4u);
  EXPECT_EQ(p.halfspaces().size(), 4u);
  EXPECT_EQ(p.locate({rational(1, 2), rational(1, 3)}), Location::RelativeInterior);
  EXPECT_EQ(p.locate(pt(1, 0)), Location::Boundary);
  EXPECT_EQ(p.locate(pt(2, 0)), Location::Outside);
}

TEST(Polytope, LowerDimensional) {
  auto seg = Polytope::from_points(3, {{1, 0, 0}, {0, 1, 0}});
  EXPECT_EQ(seg.dim(), 1);
  EXPECT_EQ(seg.equalities().size(), 2u);
  EXPECT_EQ(seg.locate({rational(1, 2), rational(1, 2), 0}), Location::RelativeInterior);
  EXPECT_EQ(seg.locate({1, 0, 0}), Location::Boundary);
  auto single = Polytope::from_points(2, {pt(3, 4)});
  EXPECT_EQ(single.dim(), 0);
  EXPECT_EQ(single.locate(pt(3, 4)), Location::RelativeInterior);
}

TEST(Polytope, FromConstraints) {
  auto tri = Polytope::from_constraints(2, {{{-1, 0}, 0}, {{0, -1}, 0}, {{1, 1}, 1}});
  EXPECT_EQ(sorted(tri.vertices()), sorted({pt(0, 0), pt(0, 1), pt(1, 0)}));
  EXPECT_THROW(Polytope::from_constraints(2, {{{-1, 0}, 0}}), UnboundedError);
  EXPECT_TRUE(Polytope::from_constraints(1, {{{1}, -1}, {{-1}, -1}}).is_empty());
}

TEST(Polytope, ConvexCombination) {
  std::vector<Vector> gens{pt(0, 0), pt(4, 0), pt(0, 4), pt(4, 4)};
  Vector x{Rational(1), Rational(3)};
  Vector w = rational_convex_combination(x, gens);
  Rational total = 0;
  Vector back(2);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    EXPECT_GE(sgn(w[i]), 0);
    total += w[i];
    for (int k = 0; k < 2; ++k) back[k] += w[i] * gens[i][k];
  }
  EXPECT_EQ(total, 1);
  EXPECT_EQ(back, x);
  EXPECT_THROW(rational_convex_combination(pt(5, 5), gens), NotInHullError);
}

TEST(Cone, SliceAndMembership) {
  Cone c(2, {pt(1, 0), pt(1, 1)});
  EXPECT_TRUE(c.contains(pt(3, 1)));
  EXPECT_FALSE(c.contains(pt(0, 1)));
  auto p = slice_cone(c, pt(1, 0), Rational(2));
  EXPECT_EQ(sorted(p.vertices()), sorted({pt(2, 0), pt(2, 2)}));
  EXPECT_THROW(slice_cone(c, pt(0, 1), Rational(1)), NoValidSliceError);
  EXPECT_THROW(slice_cone(c, pt(1, 0), Rational(0)), Error);
}

// intersect() agrees with exact polygon clipping on random convex polygons.
TEST(Property, IntersectionMatchesPolygonClipping) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coord(-6, 6);
  std::uniform_int_distribution<int> count(3, 7);
  int nonempty = 0;
  for (int t = 0; t < 150; ++t) {
    auto random_polygon = [&] {
      std::vector<Vector> pts;
      int n = count(rng);
      for (int i = 0; i < n; ++i) pts.push_back(pt(coord(rng), coord(rng)));
      return hull2d(pts);
    };
    auto a = random_polygon(), b = random_polygon();
    if (a.size() < 3 || b.size() < 3) continue;
    auto want = hull2d(clip(a, b));
    auto got = intersect(Polytope::from_points(2, a), Polytope::from_points(2, b));
    if (want.empty()) {
      EXPECT_TRUE(got.is_empty());
      continue;
    }
    ++nonempty;
    EXPECT_EQ(sorted(got.vertices()), sorted(want));
  }
  EXPECT_GT(nonempty, 50);
}
