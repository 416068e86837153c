#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stoich/dd.hpp"
#include "stoich/lp.hpp"
#include "stoich/ratlin.hpp"

namespace stoich::geometry {

using ratlin::Matrix;
using ratlin::Subspace;

class UnboundedError : public Error {
 public:
  using Error::Error;
};

class NoValidSliceError : public Error {
 public:
  NoValidSliceError(std::size_t index)
      : Error("generator " + std::to_string(index) + " does not meet the slicing hyperplane positively"),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class NotInHullError : public Error {
 public:
  using Error::Error;
};

// normal . x <= offset (or = offset for equalities); normal is a primitive integer vector.
struct Halfspace {
  Vector normal;
  Rational offset;
  bool operator==(const Halfspace& o) const { return normal == o.normal && offset == o.offset; }
  bool operator<(const Halfspace& o) const {
    return normal < o.normal || (normal == o.normal && offset < o.offset);
  }
};

enum class Location { Outside, Boundary, RelativeInterior };

class Polytope {
 public:
  Polytope() = default;

  static Polytope empty(std::size_t ambient) {
    Polytope p;
    p.ambient_ = ambient;
    p.dim_ = -1;
    return p;
  }

  static Polytope from_points(std::size_t ambient, std::vector<Vector> points);

  // {x : normal . x <= offset for ineqs, normal . x = offset for eqs}; throws if unbounded.
  static Polytope from_constraints(std::size_t ambient, const std::vector<Halfspace>& inequalities,
                                   const std::vector<Halfspace>& equalities = {});

  std::size_t ambient_dim() const { return ambient_; }
  int dim() const { return dim_; }
  bool is_empty() const { return dim_ < 0; }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const std::vector<Halfspace>& equalities() const { return equalities_; }

  Location locate(const Vector& x) const {
    if (x.size() != ambient_) throw DimensionError("point has wrong dimension");
    if (is_empty()) return Location::Outside;
    for (const auto& e : equalities_)
      if (dot(e.normal, x) != e.offset) return Location::Outside;
    bool boundary = false;
    for (const auto& h : halfspaces_) {
      Rational v = dot(h.normal, x);
      if (v > h.offset) return Location::Outside;
      if (v == h.offset) boundary = true;
    }
    return boundary ? Location::Boundary : Location::RelativeInterior;
  }
  bool contains(const Vector& x) const { return locate(x) != Location::Outside; }

  Vector interior_point() const {
    if (is_empty()) throw Error("empty polytope has no interior point");
    Vector c(ambient_);
    for (const auto& v : vertices_)
      for (std::size_t i = 0; i < ambient_; ++i) c[i] += v[i];
    for (auto& x : c) x /= static_cast<long>(vertices_.size());
    return c;
  }

  Polytope scaled(const Rational& s) const {
    if (is_empty()) return *this;
    auto vs = vertices_;
    for (auto& v : vs)
      for (auto& x : v) x *= s;
    return from_points(ambient_, vs);
  }

  bool operator==(const Polytope& o) const {
    return ambient_ == o.ambient_ && dim_ == o.dim_ && vertices_ == o.vertices_ &&
           halfspaces_ == o.halfspaces_ && equalities_ == o.equalities_;
  }

 private:
  std::size_t ambient_ = 0;
  int dim_ = -1;
  std::vector<Vector> vertices_;
  std::vector<Halfspace> halfspaces_;
  std::vector<Halfspace> equalities_;
};

namespace detail {

inline Halfspace scale_primitive(const Vector& normal, const Rational& offset) {
  Integer l = 1;
  for (const auto& x : normal) l = lcm(l, x.get_den());
  Integer g = 0;
  for (const auto& x : normal) g = gcd(g, Rational(x * l).get_num());
  Rational f = Rational(l) / Rational(g);
  Halfspace h;
  for (const auto& x : normal) h.normal.push_back(x * f);
  h.offset = offset * f;
  return h;
}

}  // namespace detail

inline Polytope Polytope::from_points(std::size_t ambient, std::vector<Vector> points) {
  if (points.empty()) return empty(ambient);
  for (auto& p : points) {
    if (p.size() != ambient) throw DimensionError("point has wrong dimension");
    for (auto& x : p) x.canonicalize();
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  // Dual of the homogenized cone over (1, p): a0 + a.p >= 0 for all points.
  std::vector<Vector> cons;
  for (const auto& p : points) {
    Vector g(ambient + 1);
    g[0] = 1;
    for (std::size_t i = 0; i < ambient; ++i) g[i + 1] = p[i];
    cons.push_back(g);
  }
  dd::ConeGenerators dual = dd::generators(ambient + 1, {}, cons);

  Polytope P;
  P.ambient_ = ambient;

  std::vector<Vector> eq_rows;
  for (const auto& l : dual.lineality) {
    Vector row(ambient + 1);
    for (std::size_t i = 0; i < ambient; ++i) row[i] = l[i + 1];
    row[ambient] = -l[0];
    eq_rows.push_back(row);
  }
  Matrix eq_rref = eq_rows.empty() ? Matrix(0, ambient + 1) : ratlin::rref(Matrix::from_rows(eq_rows)).reduced;
  std::vector<Vector> eq_normals;
  for (std::size_t i = 0; i < eq_rref.rows(); ++i) {
    Vector full = eq_rref.row(i);
    Vector n(full.begin(), full.begin() + ambient);
    P.equalities_.push_back(detail::scale_primitive(n, eq_rref(i, ambient)));
    eq_normals.push_back(n);
  }
  Subspace eq_space = Subspace::span(ambient, eq_normals);
  P.dim_ = static_cast<int>(ambient - eq_space.dim());

  for (const auto& r : dual.rays) {
    Vector n(ambient);
    bool nonzero = false;
    for (std::size_t i = 0; i < ambient; ++i) {
      n[i] = -r[i + 1];
      if (sgn(n[i]) != 0) nonzero = true;
    }
    if (!nonzero) continue;
    Rational off = r[0];
    // Reduce the normal modulo the equality directions.
    if (eq_space.dim() > 0) {
      Vector proj = ratlin::orthogonal_projection(n, eq_space);
      Vector reduced(ambient);
      for (std::size_t i = 0; i < ambient; ++i) reduced[i] = n[i] - proj[i];
      if (is_zero(reduced)) continue;
      // proj is a combination of equality normals; shift the offset by the same combination.
      Matrix en = Matrix::from_rows(eq_normals, ambient).transpose();
      auto sol = ratlin::solve_affine(en, proj);
      for (std::size_t k = 0; k < eq_normals.size(); ++k) off -= sol->particular[k] * eq_rref(k, ambient);
      n = reduced;
    }
    P.halfspaces_.push_back(detail::scale_primitive(n, off));
  }
  std::sort(P.halfspaces_.begin(), P.halfspaces_.end());
  P.halfspaces_.erase(std::unique(P.halfspaces_.begin(), P.halfspaces_.end()), P.halfspaces_.end());

  for (const auto& p : points) {
    std::vector<Vector> tight = eq_normals;
    for (const auto& h : P.halfspaces_)
      if (dot(h.normal, p) == h.offset) tight.push_back(h.normal);
    if (ratlin::rank(tight, ambient) == ambient) P.vertices_.push_back(p);
  }
  return P;
}

inline Polytope Polytope::from_constraints(std::size_t ambient, const std::vector<Halfspace>& inequalities,
                                           const std::vector<Halfspace>& equalities) {
  // Homogenize: t * offset - normal . x >= 0, t >= 0.
  std::vector<Vector> ineq, eq;
  auto lift = [&](const Halfspace& h) {
    if (h.normal.size() != ambient) throw DimensionError("constraint has wrong dimension");
    Vector row(ambient + 1);
    row[0] = h.offset;
    for (std::size_t i = 0; i < ambient; ++i) row[i + 1] = -h.normal[i];
    return row;
  };
  for (const auto& e : equalities) eq.push_back(lift(e));
  Vector t(ambient + 1);
  t[0] = 1;
  ineq.push_back(t);
  for (const auto& h : inequalities) ineq.push_back(lift(h));
  dd::ConeGenerators g = dd::generators(ambient + 1, eq, ineq);

  std::vector<Vector> pts;
  bool recession = !g.lineality.empty();
  for (const auto& r : g.rays) {
    if (sgn(r[0]) > 0) {
      Vector p(ambient);
      for (std::size_t i = 0; i < ambient; ++i) p[i] = r[i + 1] / r[0];
      pts.push_back(p);
    } else {
      recession = true;
    }
  }
  if (pts.empty()) return empty(ambient);
  if (recession) throw UnboundedError("constraint region is unbounded");
  return from_points(ambient, pts);
}

inline Polytope convex_hull(std::size_t ambient, const std::vector<Vector>& points) {
  if (points.empty()) throw Error("convex hull of no points");
  return Polytope::from_points(ambient, points);
}

inline Polytope intersect(const Polytope& a, const Polytope& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("polytopes live in different ambient spaces");
  if (a.is_empty() || b.is_empty()) return Polytope::empty(a.ambient_dim());
  auto ineq = a.halfspaces();
  ineq.insert(ineq.end(), b.halfspaces().begin(), b.halfspaces().end());
  auto eq = a.equalities();
  eq.insert(eq.end(), b.equalities().begin(), b.equalities().end());
  return Polytope::from_constraints(a.ambient_dim(), ineq, eq);
}

class Cone {
 public:
  Cone() = default;
  Cone(std::size_t ambient, const std::vector<Vector>& gens) : ambient_(ambient) {
    for (const auto& g : gens) {
      if (g.size() != ambient) throw DimensionError("cone generator has wrong dimension");
      if (is_zero(g)) throw Error("zero cone generator");
      Vector p = primitive(g);
      if (std::find(gens_.begin(), gens_.end(), p) == gens_.end()) gens_.push_back(p);
    }
  }
  std::size_t ambient_dim() const { return ambient_; }
  const std::vector<Vector>& generators() const { return gens_; }
  std::size_t dim() const { return ratlin::rank(gens_, ambient_); }

  bool contains(const Vector& x) const {
    if (x.size() != ambient_) throw DimensionError("point has wrong dimension");
    if (gens_.empty()) return is_zero(x);
    return lp::nonnegative_solution(Matrix::from_columns(gens_, ambient_), x).has_value();
  }

  // Inequalities a . y >= 0 and equalities a . y = 0 describing the cone.
  dd::ConeGenerators facets() const {
    if (gens_.empty()) return {Matrix::identity(ambient_).row_list(), {}};
    return dd::generators(ambient_, {}, gens_);
  }

 private:
  std::size_t ambient_ = 0;
  std::vector<Vector> gens_;
};

inline Cone cone_from_rays(std::size_t ambient, const std::vector<Vector>& vectors) { return Cone(ambient, vectors); }

// Generators of the intersection of two cones; lines appear as opposite ray pairs.
inline dd::ConeGenerators intersect_cones(const Cone& a, const Cone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("cones live in different ambient spaces");
  auto fa = a.facets(), fb = b.facets();
  auto eq = fa.lineality;
  eq.insert(eq.end(), fb.lineality.begin(), fb.lineality.end());
  auto ineq = fa.rays;
  ineq.insert(ineq.end(), fb.rays.begin(), fb.rays.end());
  return dd::generators(a.ambient_dim(), eq, ineq);
}

inline Polytope slice_cone(const Cone& c, const Vector& normal, const Rational& offset) {
  if (normal.size() != c.ambient_dim()) throw DimensionError("slicing normal has wrong dimension");
  if (sgn(offset) <= 0) throw Error("slicing offset must be positive");
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < c.generators().size(); ++i) {
    const Vector& g = c.generators()[i];
    Rational d = dot(normal, g);
    if (sgn(d) <= 0) throw NoValidSliceError(i);
    Vector p = g;
    for (auto& x : p) x *= offset / d;
    pts.push_back(p);
  }
  return Polytope::from_points(c.ambient_dim(), pts);
}

// Weights w >= 0 summing to 1 with sum w_i g_i = x, using a placing triangulation
// of the generators in lexicographic order; the first simplex containing x wins.
inline Vector rational_convex_combination(const Vector& x, const std::vector<Vector>& generators) {
  if (generators.empty()) throw Error("no generators");
  const std::size_t n = x.size();
  for (const auto& g : generators)
    if (g.size() != n) throw DimensionError("generator has wrong dimension");

  std::vector<std::size_t> order(generators.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return generators[a] < generators[b]; });

  auto lifted = [&](const Vector& p) {
    Vector v(n + 1);
    v[0] = 1;
    for (std::size_t i = 0; i < n; ++i) v[i + 1] = p[i];
    return v;
  };
  // Affine coordinates of p relative to a simplex, or nothing if p is off its affine hull.
  auto coords = [&](const std::vector<std::size_t>& simplex, const Vector& p) -> std::optional<Vector> {
    std::vector<Vector> cols;
    for (auto i : simplex) cols.push_back(lifted(generators[i]));
    auto sol = ratlin::solve_affine(Matrix::from_columns(cols, n + 1), lifted(p));
    if (!sol) return std::nullopt;
    return sol->particular;
  };

  std::vector<std::size_t> placed;
  std::vector<std::vector<std::size_t>> simplices;
  for (auto idx : order) {
    if (placed.empty()) {
      placed.push_back(idx);
      simplices.push_back({idx});
      continue;
    }
    std::vector<Vector> rows;
    for (auto p : placed) rows.push_back(lifted(generators[p]));
    std::size_t r = ratlin::rank(rows, n + 1);
    rows.push_back(lifted(generators[idx]));
    if (ratlin::rank(rows, n + 1) > r) {
      for (auto& s : simplices) s.push_back(idx);
      placed.push_back(idx);
      continue;
    }
    bool inside = false;
    for (const auto& s : simplices) {
      auto c = coords(s, generators[idx]);
      if (c && std::all_of(c->begin(), c->end(), [](const Rational& v) { return sgn(v) >= 0; })) {
        inside = true;
        break;
      }
    }
    placed.push_back(idx);
    if (inside) continue;
    // Cone the new point over every facet visible from it.
    std::vector<std::vector<std::size_t>> added;
    for (const auto& s : simplices) {
      auto c = coords(s, generators[idx]);
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (sgn((*c)[k]) >= 0) continue;
        std::vector<std::size_t> facet;
        for (std::size_t j = 0; j < s.size(); ++j)
          if (j != k) facet.push_back(s[j]);
        // Visible facet must be on the hull boundary: no other simplex shares it.
        std::vector<std::size_t> sorted_facet = facet;
        std::sort(sorted_facet.begin(), sorted_facet.end());
        int sharing = 0;
        for (const auto& t : simplices) {
          std::vector<std::size_t> st = t;
          std::sort(st.begin(), st.end());
          if (std::includes(st.begin(), st.end(), sorted_facet.begin(), sorted_facet.end())) ++sharing;
        }
        if (sharing != 1) continue;
        facet.push_back(idx);
        added.push_back(facet);
      }
    }
    simplices.insert(simplices.end(), added.begin(), added.end());
  }

  for (const auto& s : simplices) {
    auto c = coords(s, x);
    if (!c) continue;
    if (!std::all_of(c->begin(), c->end(), [](const Rational& v) { return sgn(v) >= 0; })) continue;
    Vector w(generators.size());
    for (std::size_t k = 0; k < s.size(); ++k) w[s[k]] = (*c)[k];
    return w;
  }
  throw NotInHullError("point is not in the convex hull of the generators");
}

}  // namespace stoich::geometry
