#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stoich/dd.hpp"
#include "stoich/geometry.hpp"
#include "stoich/lattice.hpp"
#include "stoich/lp.hpp"
#include "stoich/ratlin.hpp"

namespace stoich::mechanism {

using geometry::Halfspace;
using geometry::Polytope;
using ratlin::Matrix;
using ratlin::Subspace;

// Rows are species, columns elementary reactions; negative entries are consumed.
struct Mechanism {
  std::vector<std::string> species;
  std::vector<std::size_t> known;
  std::vector<std::size_t> intermediates;
  Matrix N;

  void validate() const {
    const std::size_t s = species.size();
    if (N.rows() != s) throw DimensionError("mechanism matrix needs one row per species");
    std::vector<int> seen(s, 0);
    for (auto k : known) {
      if (k >= s) throw Error("known index out of range");
      ++seen[k];
    }
    for (auto u : intermediates) {
      if (u >= s) throw Error("intermediate index out of range");
      ++seen[u];
    }
    for (std::size_t i = 0; i < s; ++i)
      if (seen[i] != 1) throw Error("known and intermediate species must partition the species list");
    for (std::size_t j = 0; j < N.cols(); ++j) {
      bool neg = false, pos = false;
      for (std::size_t i = 0; i < s; ++i) {
        if (N(i, j).get_den() != 1) throw Error("mechanism entries must be integers");
        neg = neg || sgn(N(i, j)) < 0;
        pos = pos || sgn(N(i, j)) > 0;
      }
      if (!neg || !pos) throw Error("elementary reaction " + std::to_string(j + 1) + " lacks a reactant or a product");
    }
  }
};

struct ConservationReport {
  Subspace mass_space;                    // NS(N^T)
  std::optional<Subspace> element_space;  // RS(M)
  std::optional<long> homology_dim;       // dim NS(M) - rank N
  Subspace observed_space;                // pi_K NS(N^T)
  bool conservative = false;
  std::optional<Vector> positive_law;     // witness when conservative
};

inline ConservationReport conservation_report(const Mechanism& m, const std::optional<Matrix>& elements = std::nullopt) {
  m.validate();
  ConservationReport r;
  Matrix nt = m.N.transpose();
  r.mass_space = Subspace::null_space(nt);
  r.observed_space = ratlin::project(r.mass_space, m.known);
  if (elements) {
    if (elements->cols() != m.species.size()) throw DimensionError("elemental matrix needs one column per species");
    Matrix prod = *elements * m.N;
    for (std::size_t i = 0; i < prod.rows(); ++i)
      for (std::size_t j = 0; j < prod.cols(); ++j)
        if (sgn(prod(i, j)) != 0) throw Error("elemental matrix does not annihilate the mechanism (M N != 0)");
    r.element_space = Subspace::row_space(*elements);
    if (!r.mass_space.contains(*r.element_space)) throw Error("element space is not contained in the mass space");
    r.homology_dim = static_cast<long>(Subspace::null_space(*elements).dim()) - static_cast<long>(ratlin::rank(m.N));
  }
  // y = 1 + z, z >= 0, N^T y = 0.
  Vector rhs = nt * Vector(m.species.size(), Rational(1));
  for (auto& x : rhs) x = -x;
  if (auto z = lp::nonnegative_solution(nt, rhs)) {
    r.conservative = true;
    Vector y = *z;
    for (auto& x : y) x += 1;
    r.positive_law = primitive(y);
  }
  return r;
}

struct ConsistentOptions {
  bool known_only = false;      // restrict to vectors vanishing on intermediates
  bool include_origin = true;   // count the zero vector
  bool projective = false;      // collapse positive multiples
};

struct ConsistentResult {
  std::vector<IntVector> points;
  std::size_t count() const { return points.size(); }
};

namespace detail {

struct ConeTest {
  std::vector<Vector> equalities;    // a . y = 0
  std::vector<Vector> inequalities;  // a . y >= 0

  bool contains(const Vector& y) const {
    for (const auto& a : equalities)
      if (sgn(dot(a, y)) != 0) return false;
    for (const auto& a : inequalities)
      if (sgn(dot(a, y)) < 0) return false;
    return true;
  }
};

inline ConeTest column_cone(const Matrix& n) {
  geometry::Cone c(n.rows(), n.col_list());
  auto f = c.facets();
  return {f.lineality, f.rays};
}

}  // namespace detail

inline bool in_column_cone(const Mechanism& m, const Vector& c) {
  return lp::nonnegative_solution(m.N, c).has_value();
}

// Integer points c with sum |c_i| <= t in the cone of the columns of N.
inline ConsistentResult consistent_reactions(const Mechanism& m, long t, const ConsistentOptions& opts = {}) {
  m.validate();
  ConsistentResult out;
  if (t < 0) throw Error("bound must be nonnegative");
  const std::size_t s = m.species.size();
  auto test = detail::column_cone(m.N);
  std::vector<bool> free(s, true);
  if (opts.known_only) {
    std::fill(free.begin(), free.end(), false);
    for (auto k : m.known) free[k] = true;
  }
  Vector y(s);
  IntVector yi(s);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long budget) {
    if (i == s) {
      bool zero = budget == t;
      if (zero && !opts.include_origin) return;
      if (!test.contains(y)) return;
      if (opts.projective && !zero) {
        Integer g = 0;
        for (const auto& z : yi) g = gcd(g, z);
        if (g != 1) return;
      }
      out.points.push_back(yi);
      return;
    }
    if (!free[i]) {
      yi[i] = 0;
      y[i] = 0;
      rec(i + 1, budget);
      return;
    }
    for (long v = -budget; v <= budget; ++v) {
      yi[i] = v;
      y[i] = v;
      rec(i + 1, budget - (v < 0 ? -v : v));
    }
  };
  rec(0, t);
  return out;
}

// cone(N) cut by the cross-polytope of radius t (and the known coordinates when requested).
inline Polytope consistent_region(const Mechanism& m, long t, bool known_only = false) {
  m.validate();
  const std::size_t s = m.species.size();
  auto test = detail::column_cone(m.N);
  std::vector<Halfspace> ineq, eq;
  for (const auto& a : test.equalities) eq.push_back({a, 0});
  for (const auto& a : test.inequalities) {
    Vector neg = a;
    for (auto& x : neg) x = -x;
    ineq.push_back({neg, 0});
  }
  if (known_only) {
    for (auto u : m.intermediates) {
      Vector e(s);
      e[u] = 1;
      eq.push_back({e, 0});
    }
  }
  for (std::size_t mask = 0; mask < (std::size_t(1) << s); ++mask) {
    Vector sg(s);
    for (std::size_t i = 0; i < s; ++i) sg[i] = (mask >> i & 1) ? -1 : 1;
    ineq.push_back({sg, Rational(t)});
  }
  return Polytope::from_constraints(s, ineq, eq);
}

class InfiniteRepresentationsError : public Error {
 public:
  InfiniteRepresentationsError(Vector witness)
      : Error("0 lies in the convex hull of the mechanism columns; representations are unbounded"),
        witness_(std::move(witness)) {}
  const Vector& witness() const { return witness_; }

 private:
  Vector witness_;
};

// A nonnegative kernel vector of N summing to 1, if any (0 in the hull of the columns).
inline std::optional<Vector> recession_witness(const Matrix& n) {
  Matrix a(n.rows() + 1, n.cols());
  for (std::size_t i = 0; i < n.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) a(i, j) = n(i, j);
  for (std::size_t j = 0; j < n.cols(); ++j) a(n.rows(), j) = 1;
  Vector b(n.rows() + 1);
  b[n.rows()] = 1;
  return lp::nonnegative_solution(a, b);
}

inline bool representations_finite(const Mechanism& m) { return !recession_witness(m.N).has_value(); }

// Overall reactions given on K only are padded with zeros on the intermediates.
inline Vector pad_overall(const Mechanism& m, const Vector& c) {
  if (c.size() == m.species.size()) return c;
  if (c.size() != m.known.size()) throw DimensionError("overall reaction must cover all species or exactly the known ones");
  return ratlin::embed(c, m.known, m.species.size());
}

// Nonnegative integer x with N x = c (and sum x <= step_bound when given).
inline std::vector<IntVector> algebraic_representations(const Mechanism& m, const Vector& c,
                                                        std::optional<long> step_bound = std::nullopt) {
  m.validate();
  Vector full = pad_overall(m, c);
  for (const auto& x : full)
    if (x.get_den() != 1) throw Error("overall reaction must be integral");
  const std::size_t k = m.N.cols();
  if (!step_bound) {
    if (auto w = recession_witness(m.N)) throw InfiniteRepresentationsError(*w);
  }
  std::vector<Halfspace> ineq, eq;
  for (std::size_t j = 0; j < k; ++j) {
    Vector e(k);
    e[j] = -1;
    ineq.push_back({e, 0});
  }
  if (step_bound) ineq.push_back({Vector(k, Rational(1)), Rational(*step_bound)});
  for (std::size_t i = 0; i < m.N.rows(); ++i) eq.push_back({m.N.row(i), full[i]});
  Polytope p = Polytope::from_constraints(k, ineq, eq);
  return lattice::lattice_points(p, false);
}

// Dimensions in the layout of the inverse-problem comparison table.
struct DimensionTable {
  std::size_t ns, rs, k, pk_ns, pk_rs, intersection, o, o_mod_pk_rs, pu_rs;
};

struct InverseReport {
  Subspace row_space;      // RS(M) in S
  Subspace null_space;     // NS(M) in S
  Subspace pk_rs, pk_ns;   // projections to K
  Subspace pu_rs;          // RS(M) projected to U
  Subspace z;              // orthogonal complement of pi_K RS(M) in K
  Subspace observed;       // O in K
  Subspace proj_z_o;       // orthogonal projection of O onto Z
  Subspace ambiguity;      // pi_K NS(M) cap pi_K RS(M)
  Subspace kernel_phi;     // i_U NS(M_U), the part of NS(M) invisible on K
  std::optional<Subspace> h;  // lift of proj_Z O into NS(M) when observations are assumed complete
  DimensionTable table{};

  // Candidate mechanism space for a chosen H': the orthogonal complement of H' + RS(M).
  Subspace candidate_mechanism_space(const Subspace& h_prime) const {
    return ratlin::sum(h_prime, row_space).complement();
  }
};

inline InverseReport inverse_mechanism_spaces(std::size_t species_count, const std::vector<std::size_t>& known,
                                              const std::vector<std::size_t>& intermediates, const Matrix& elements,
                                              const Subspace& observed, bool assume_complete) {
  if (elements.cols() != species_count) throw DimensionError("elemental matrix needs one column per species");
  InverseReport r;
  r.row_space = Subspace::row_space(elements);
  r.null_space = Subspace::null_space(elements);
  if (observed.ambient_dim() == known.size()) {
    r.observed = observed;
  } else if (observed.ambient_dim() == species_count) {
    for (const auto& v : observed.basis_vectors())
      for (auto u : intermediates)
        if (sgn(v[u]) != 0) throw Error("observed dependencies involve intermediate coordinates");
    r.observed = ratlin::project(observed, known);
  } else {
    throw DimensionError("observed space has the wrong ambient dimension");
  }
  r.pk_rs = ratlin::project(r.row_space, known);
  r.pk_ns = ratlin::project(r.null_space, known);
  r.pu_rs = ratlin::project(r.row_space, intermediates);
  r.z = r.pk_rs.complement();
  r.proj_z_o = ratlin::orthogonal_projection(r.observed, r.z);
  r.ambiguity = ratlin::intersection(r.pk_ns, r.pk_rs);
  Matrix mu = elements.select_columns(intermediates);
  r.kernel_phi = ratlin::embed(Subspace::null_space(mu), intermediates, species_count);
  if (assume_complete) {
    Subspace lift = ratlin::preimage(r.proj_z_o, r.null_space, known);
    if (!ratlin::project(lift, known).contains(r.proj_z_o)) throw Error("projected observations cannot be lifted into NS(M)");
    r.h = lift;
  }
  r.table = {r.null_space.dim(), r.row_space.dim(), known.size(),  r.pk_ns.dim(), r.pk_rs.dim(),
             r.ambiguity.dim(),  r.observed.dim(),  ratlin::quotient_dim(r.observed, r.pk_rs), r.pu_rs.dim()};
  return r;
}

// H for a given mechanism: the part of NS(M) orthogonal to the columns of N.
inline Subspace mechanism_h_space(const Matrix& n, const Matrix& elements) {
  return ratlin::complement_within(Subspace::column_space(n), Subspace::null_space(elements));
}

struct PrecedenceReport {
  std::vector<std::string> vertex_names;          // "K" then the intermediates
  std::vector<std::set<std::size_t>> reactant_vertices, product_vertices;
  std::vector<std::set<std::size_t>> iterates;    // iterates[i] = vertices of phi^(i+1) applied to the empty face
  std::vector<std::optional<std::size_t>> level;  // first i (1-based) with R(x) inside phi^i
  std::vector<std::vector<std::size_t>> level_sets;

  bool occurs(std::size_t reaction) const { return level.at(reaction).has_value(); }
};

inline PrecedenceReport precedence_analysis(const Mechanism& m) {
  m.validate();
  PrecedenceReport p;
  p.vertex_names.push_back("K");
  std::vector<std::size_t> vertex_of(m.species.size(), 0);
  for (std::size_t k = 0; k < m.intermediates.size(); ++k) {
    vertex_of[m.intermediates[k]] = k + 1;
    p.vertex_names.push_back(m.species[m.intermediates[k]]);
  }
  const std::size_t r = m.N.cols();
  for (std::size_t j = 0; j < r; ++j) {
    std::set<std::size_t> rv, pv;
    for (std::size_t i = 0; i < m.species.size(); ++i) {
      if (sgn(m.N(i, j)) < 0) rv.insert(vertex_of[i]);
      if (sgn(m.N(i, j)) > 0) pv.insert(vertex_of[i]);
    }
    p.reactant_vertices.push_back(rv);
    p.product_vertices.push_back(pv);
  }
  p.level.assign(r, std::nullopt);
  std::set<std::size_t> current{0};
  for (std::size_t i = 1;; ++i) {
    p.iterates.push_back(current);
    std::vector<std::size_t> enabled;
    std::set<std::size_t> next = current;
    for (std::size_t j = 0; j < r; ++j) {
      if (!std::includes(current.begin(), current.end(), p.reactant_vertices[j].begin(), p.reactant_vertices[j].end()))
        continue;
      enabled.push_back(j);
      if (!p.level[j]) p.level[j] = i;
      next.insert(p.product_vertices[j].begin(), p.product_vertices[j].end());
    }
    p.level_sets.push_back(enabled);
    if (next == current) break;
    current = next;
  }
  return p;
}

inline bool order_realizable(const PrecedenceReport& p, const std::vector<long>& x) {
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] != 0) support.push_back(j);
  for (const auto& s : p.level_sets)
    if (s == support) return true;
  return false;
}

struct CandidateResult {
  std::vector<IntVector> vectors;  // both signs
  std::vector<IntVector> lines;    // one per line, first nonzero entry positive
};

// Integer points of the subspace in [-b, b]^s with both signs present.
inline CandidateResult candidate_elementary_reactions(const Subspace& space, long b = 3) {
  if (b < 1) throw Error("box bound must be at least 1");
  CandidateResult out;
  const std::size_t s = space.ambient_dim(), d = space.dim();
  if (d == 0) return out;
  const Matrix& basis = space.basis();
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t c = 0;
    while (sgn(basis(i, c)) == 0) ++c;
    pivots.push_back(c);
  }
  // RREF basis: the pivot coordinate of a point equals its coefficient.
  std::vector<long> coef(d);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      IntVector v(s);
      bool pos = false, neg = false;
      for (std::size_t j = 0; j < s; ++j) {
        Rational x = 0;
        for (std::size_t k = 0; k < d; ++k) x += coef[k] * basis(k, j);
        if (x.get_den() != 1) return;
        if (x > b || x < -b) return;
        v[j] = x.get_num();
        pos = pos || sgn(x) > 0;
        neg = neg || sgn(x) < 0;
      }
      if (!pos || !neg) return;
      out.vectors.push_back(v);
      for (const auto& z : v) {
        if (z == 0) continue;
        if (z > 0) out.lines.push_back(v);
        break;
      }
      return;
    }
    for (long c = -b; c <= b; ++c) {
      coef[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace stoich::mechanism
