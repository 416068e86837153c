#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stoich/dd.hpp"
#include "stoich/formula.hpp"
#include "stoich/geometry.hpp"
#include "stoich/lp.hpp"
#include "stoich/ratlin.hpp"

namespace stoich::balance {

using formula::Composition;
using formula::Reaction;
using formula::Species;
using geometry::Polytope;
using ratlin::Matrix;
using ratlin::Subspace;

class NoBalanceError : public Error {
 public:
  using Error::Error;
};

// Signed integer coefficients: reactants <= 0, products >= 0, coprime.
class Balance {
 public:
  Balance() = default;

  static Balance from_signed(const Reaction& r, const Vector& coeffs) {
    if (coeffs.size() != r.size()) throw DimensionError("balance length does not match species count");
    if (is_zero(coeffs)) throw NoBalanceError("zero balance");
    bool forward = true, backward = true;
    for (std::size_t i = 0; i < r.size(); ++i) {
      int s = sgn(coeffs[i]);
      if (r.is_reactant(i)) {
        forward = forward && s <= 0;
        backward = backward && s >= 0;
      } else {
        forward = forward && s >= 0;
        backward = backward && s <= 0;
      }
    }
    if (!forward && !backward) throw Error("coefficients do not respect the reaction's sides");
    Balance b;
    b.reaction_ = r;
    b.coefficients_ = primitive_integer(coeffs);
    if (!forward)
      for (auto& z : b.coefficients_) z = -z;
    return b;
  }

  const Reaction& reaction() const { return reaction_; }
  const IntVector& coefficients() const { return coefficients_; }
  Vector vector() const { return to_vector(coefficients_); }

  bool is_strict() const {
    for (const auto& z : coefficients_)
      if (z == 0) return false;
    return true;
  }

  // Nonzero magnitudes keyed by signed label, for order-free comparison.
  std::map<std::string, Integer> key() const {
    std::map<std::string, Integer> k;
    for (std::size_t i = 0; i < coefficients_.size(); ++i)
      if (coefficients_[i] != 0) k[reaction_.species(i).label] = coefficients_[i];
    return k;
  }

  std::string to_string() const {
    auto side = [&](bool reactants) {
      std::string s;
      for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        if (reaction_.is_reactant(i) != reactants || coefficients_[i] == 0) continue;
        Integer m = abs(coefficients_[i]);
        if (!s.empty()) s += " + ";
        if (m != 1) s += m.get_str() + " ";
        s += reaction_.species(i).label;
      }
      return s.empty() ? std::string("0") : s;
    };
    return side(true) + " -> " + side(false);
  }

 private:
  Reaction reaction_;
  IntVector coefficients_;
};

inline bool same_balance(const Balance& a, const Balance& b) { return a.key() == b.key(); }

struct BalanceOptions {
  std::optional<std::vector<std::string>> element_order;
};

// Columns are species (reactants then products); rows are elements, then charge if any species is charged.
struct SpeciesSystem {
  std::vector<std::string> element_order;
  bool with_charge = false;
  Matrix matrix;

  std::size_t ambient() const { return matrix.rows(); }
};

inline SpeciesSystem species_system(const Reaction& r, const BalanceOptions& opts = {}) {
  r.validate();
  SpeciesSystem s;
  s.element_order = opts.element_order ? *opts.element_order : formula::element_order(r);
  s.with_charge = r.has_charge();
  std::vector<Vector> cols;
  for (std::size_t i = 0; i < r.size(); ++i)
    cols.push_back(formula::composition_vector(r.species(i).composition, s.element_order, s.with_charge));
  s.matrix = Matrix::from_columns(cols, s.element_order.size() + (s.with_charge ? 1 : 0));
  return s;
}

inline std::vector<std::size_t> reactant_indices(const Reaction& r) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < r.reactants.size(); ++i) v.push_back(i);
  return v;
}
inline std::vector<std::size_t> product_indices(const Reaction& r) {
  std::vector<std::size_t> v;
  for (std::size_t i = r.reactants.size(); i < r.size(); ++i) v.push_back(i);
  return v;
}

struct Slice {
  Vector normal;  // primitive integer
  Rational offset;
};

// Scales a direction y with y . v >= 1 to a primitive integer normal; the offset keeps every v on the far side.
inline Slice slice_from_direction(const Vector& y) {
  Integer l = 1;
  for (const auto& x : y) l = lcm(l, x.get_den());
  Integer g = 0;
  for (const auto& x : y) g = gcd(g, Rational(x * l).get_num());
  Rational f = Rational(l) / Rational(g);
  Slice s;
  for (const auto& x : y) s.normal.push_back(x * f);
  s.offset = f;
  return s;
}

// A hyperplane n . x = h meeting every column positively: the element sum when
// every column has an element, otherwise an exact search for n with n . v >= 1.
inline std::optional<Slice> find_slice(const Matrix& columns, std::size_t element_rows) {
  Vector n(columns.rows());
  for (std::size_t i = 0; i < element_rows; ++i) n[i] = 1;
  bool ok = true;
  for (std::size_t j = 0; j < columns.cols() && ok; ++j) ok = sgn(dot(n, columns.col(j))) > 0;
  if (ok) return Slice{n, 1};
  auto y = lp::strictly_positive_direction(columns.transpose());
  if (!y) return std::nullopt;
  return slice_from_direction(*y);
}
struct ReactionGeometry {
  SpeciesSystem system;
  std::optional<Slice> slice;
  std::vector<Vector> sliced;  // per species, when a slice exists
  Polytope reactant_polytope;
  Polytope product_polytope;
  Polytope intersection;
};

inline ReactionGeometry reaction_geometry(const Reaction& r, const BalanceOptions& opts = {}) {
  ReactionGeometry g;
  g.system = species_system(r, opts);
  const std::size_t d = g.system.ambient();
  g.slice = find_slice(g.system.matrix, g.system.element_order.size());
  if (!g.slice) return g;
  std::vector<Vector> rp, pp;
  for (std::size_t i = 0; i < r.size(); ++i) {
    Vector v = g.system.matrix.col(i);
    Rational f = g.slice->offset / dot(g.slice->normal, v);
    for (auto& x : v) x *= f;
    g.sliced.push_back(v);
    (r.is_reactant(i) ? rp : pp).push_back(v);
  }
  g.reactant_polytope = Polytope::from_points(d, rp);
  g.product_polytope = Polytope::from_points(d, pp);
  g.intersection = geometry::intersect(g.reactant_polytope, g.product_polytope);
  return g;
}

enum class BalanceKind { NoBalance, UniqueUpToScale, Multiple };

inline std::string to_string(BalanceKind k) {
  switch (k) {
    case BalanceKind::NoBalance: return "no balance";
    case BalanceKind::UniqueUpToScale: return "unique up to scale";
    case BalanceKind::Multiple: return "multiple";
  }
  return "";
}

inline BalanceKind kind_from_dim(std::size_t cone_dim) {
  if (cone_dim == 0) return BalanceKind::NoBalance;
  return cone_dim == 1 ? BalanceKind::UniqueUpToScale : BalanceKind::Multiple;
}

struct BalanceClassification {
  BalanceKind kind = BalanceKind::NoBalance;
  std::optional<int> intersection_dim;  // dimension of the sliced intersection polytope; empty when none
  std::size_t moduli_dim = 0;           // dim NS(M)
  std::size_t span_intersection_dim = 0;
  std::pair<std::size_t, std::size_t> kernel_dims{0, 0};
  std::size_t balance_cone_dim = 0;     // sign-constrained balances, computed algebraically
  std::size_t geometric_cone_dim = 0;   // intersection cone plus fibre dimensions
  std::pair<std::size_t, std::size_t> fiber_dims{0, 0};
  BalanceKind geometric_kind = BalanceKind::NoBalance;
  bool used_slice = false;

  bool dimension_identity_holds() const {
    return moduli_dim == span_intersection_dim + kernel_dims.first + kernel_dims.second;
  }
  bool routes_agree() const { return kind == geometric_kind && balance_cone_dim == geometric_cone_dim; }
};

// Generators of the sign-constrained balance cone of a species matrix.
inline dd::ConeGenerators balance_cone(const Matrix& m, std::size_t reactants,
                                       const std::vector<Vector>& extra_equalities = {}) {
  const std::size_t n = m.cols();
  std::vector<Vector> eq = m.row_list();
  eq.insert(eq.end(), extra_equalities.begin(), extra_equalities.end());
  std::vector<Vector> ineq;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n);
    e[i] = i < reactants ? -1 : 1;
    ineq.push_back(e);
  }
  return dd::generators(n, eq, ineq);
}

// Dimension of {rho >= 0 : c rho = x}, or nothing when it is empty.
inline std::optional<int> fiber_dim(const Matrix& c, const Vector& x) {
  const std::size_t k = c.cols();
  std::vector<Vector> eq;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    Vector row(k + 1);
    row[0] = -x[i];
    for (std::size_t j = 0; j < k; ++j) row[j + 1] = c(i, j);
    eq.push_back(row);
  }
  std::vector<Vector> ineq;
  for (std::size_t j = 0; j <= k; ++j) {
    Vector e(k + 1);
    e[j] = 1;
    ineq.push_back(e);
  }
  auto g = dd::generators(k + 1, eq, ineq);
  bool feasible = false;
  for (const auto& r : g.rays) feasible = feasible || sgn(r[0]) > 0;
  if (!feasible) return std::nullopt;
  return static_cast<int>(g.dim(k + 1)) - 1;
}

inline BalanceClassification classify(const Reaction& r, const BalanceOptions& opts = {}) {
  ReactionGeometry g = reaction_geometry(r, opts);
  const Matrix& m = g.system.matrix;
  const std::size_t d = m.rows();
  auto ri = reactant_indices(r), pi = product_indices(r);
  Matrix cr = m.select_columns(ri), cp = m.select_columns(pi);

  BalanceClassification c;
  c.moduli_dim = Subspace::null_space(m).dim();
  c.kernel_dims = {Subspace::null_space(cr).dim(), Subspace::null_space(cp).dim()};
  c.span_intersection_dim =
      ratlin::intersection(Subspace::column_space(cr), Subspace::column_space(cp)).dim();

  auto q = balance_cone(m, r.reactants.size());
  c.balance_cone_dim = q.dim(r.size());
  c.kind = kind_from_dim(c.balance_cone_dim);

  c.used_slice = g.slice.has_value();
  if (c.used_slice && !g.intersection.is_empty()) c.intersection_dim = g.intersection.dim();

  geometry::Cone rc(d, cr.col_list()), pc(d, cp.col_list());
  auto inter = geometry::intersect_cones(rc, pc);
  std::size_t inter_dim = inter.dim(d);
  if (!c.used_slice && inter_dim > 0) c.intersection_dim = static_cast<int>(inter_dim) - 1;
  if (inter_dim == 0) {
    c.geometric_cone_dim = 0;
  } else {
    Vector x(d);
    for (const auto& ray : inter.rays)
      for (std::size_t i = 0; i < d; ++i) x[i] += ray[i];
    if (c.used_slice && !g.intersection.is_empty()) x = g.intersection.interior_point();
    auto fr = fiber_dim(cr, x), fp = fiber_dim(cp, x);
    c.fiber_dims = {static_cast<std::size_t>(fr.value_or(0)), static_cast<std::size_t>(fp.value_or(0))};
    c.geometric_cone_dim = inter_dim + c.fiber_dims.first + c.fiber_dims.second;
  }
  c.geometric_kind = kind_from_dim(c.geometric_cone_dim);
  return c;
}

// All extreme balances (rays of the balance cone), in canonical integer form.
inline std::vector<Balance> extreme_balances(const Reaction& r, const BalanceOptions& opts = {}) {
  auto s = species_system(r, opts);
  auto q = balance_cone(s.matrix, r.reactants.size());
  std::vector<Balance> out;
  for (const auto& ray : q.rays) out.push_back(Balance::from_signed(r, ray));
  return out;
}

inline Balance unique_balance(const Reaction& r, const BalanceOptions& opts = {}) {
  auto s = species_system(r, opts);
  auto q = balance_cone(s.matrix, r.reactants.size());
  if (q.rays.empty()) throw NoBalanceError("reaction has no balance");
  if (q.dim(r.size()) != 1) throw Error("reaction has more than one balance up to scale");
  return Balance::from_signed(r, q.rays.front());
}

// Sum of the extreme balances: a balance in the relative interior of the balance cone.
inline Balance generic_balance(const Reaction& r, const BalanceOptions& opts = {}) {
  auto s = species_system(r, opts);
  auto q = balance_cone(s.matrix, r.reactants.size());
  if (q.rays.empty()) throw NoBalanceError("reaction has no balance");
  Vector sum(r.size());
  for (const auto& ray : q.rays)
    for (std::size_t i = 0; i < r.size(); ++i) sum[i] += ray[i];
  return Balance::from_signed(r, sum);
}

inline bool conserves(const Balance& b, const BalanceOptions& opts = {}) {
  auto s = species_system(b.reaction(), opts);
  return is_zero(s.matrix * b.vector());
}

struct ModuliInequality {
  Vector coefficients;  // a_i as a combination of the basis coordinates
  bool at_most_zero;    // reactants: a_i <= 0; products: a_i >= 0
  bool facet;
};

struct ModuliPolyhedron {
  std::vector<Vector> basis;  // nullspace basis, one vector per coordinate c_k
  std::vector<ModuliInequality> inequalities;
  std::vector<Vector> rays;  // generators of the balance cone in basis coordinates
  std::size_t dim = 0;
};

inline ModuliPolyhedron moduli_polyhedron(const Reaction& r, std::optional<std::vector<Vector>> basis = std::nullopt,
                                          const BalanceOptions& opts = {}) {
  auto s = species_system(r, opts);
  const std::size_t n = r.size();
  ModuliPolyhedron mp;
  Subspace ns = Subspace::null_space(s.matrix);
  if (basis) {
    for (const auto& b : *basis)
      if (b.size() != n || !ns.contains(b)) throw Error("basis vector is not a balance of the species matrix");
    if (ratlin::rank(*basis, n) != basis->size() || basis->size() != ns.dim())
      throw Error("basis does not span the nullspace");
    mp.basis = *basis;
  } else {
    mp.basis = ratlin::nullspace_basis(s.matrix);
  }
  const std::size_t k = mp.basis.size();
  std::vector<Vector> ineq;
  for (std::size_t i = 0; i < n; ++i) {
    Vector coeffs(k);
    for (std::size_t j = 0; j < k; ++j) coeffs[j] = mp.basis[j][i];
    mp.inequalities.push_back({coeffs, r.is_reactant(i), false});
    Vector g = coeffs;
    if (r.is_reactant(i))
      for (auto& x : g) x = -x;
    ineq.push_back(g);
  }
  auto gens = dd::generators(k, {}, ineq);
  mp.rays = gens.rays;
  mp.dim = gens.dim(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vector> tight;
    bool all_tight = true;
    for (const auto& ray : mp.rays) {
      if (sgn(dot(ineq[i], ray)) == 0)
        tight.push_back(ray);
      else
        all_tight = false;
    }
    mp.inequalities[i].facet = !all_tight && mp.dim > 0 && ratlin::rank(tight, k) + 1 == mp.dim;
  }
  return mp;
}

struct BalanceAt {
  Balance balance;
  bool unique;  // the point determines the balance
};

inline BalanceAt balance_at(const Reaction& r, const Vector& point, const BalanceOptions& opts = {}) {
  ReactionGeometry g = reaction_geometry(r, opts);
  if (!g.slice) throw Error("no slicing hyperplane exists for this reaction");
  if (point.size() != g.system.ambient()) throw DimensionError("point has wrong dimension");
  if (!g.intersection.contains(point)) throw Error("point is outside the intersection polytope");
  std::vector<Vector> rp, pp;
  for (std::size_t i = 0; i < r.size(); ++i) (r.is_reactant(i) ? rp : pp).push_back(g.sliced[i]);
  Vector wr = geometry::rational_convex_combination(point, rp);
  Vector wp = geometry::rational_convex_combination(point, pp);
  Vector a(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    Rational scale = g.slice->offset / dot(g.slice->normal, g.system.matrix.col(i));
    a[i] = r.is_reactant(i) ? Rational(-wr[i] * scale) : Rational(wp[i - r.reactants.size()] * scale);
  }
  Matrix cr = g.system.matrix.select_columns(reactant_indices(r));
  Matrix cp = g.system.matrix.select_columns(product_indices(r));
  bool unique = fiber_dim(cr, point).value_or(0) == 0 && fiber_dim(cp, point).value_or(0) == 0;
  return {Balance::from_signed(r, a), unique};
}

enum class Side { Reactants, Products };

struct RatioRestriction {
  Reaction replaced;  // restricted species merged into one pseudo-species
  BalanceClassification via_vertex;
  std::optional<int> via_rows_intersection_dim;
  std::size_t via_rows_cone_dim = 0;
  bool agree = false;
};

inline RatioRestriction apply_ratio_restriction(const Reaction& r, Side side, const std::vector<std::string>& labels,
                                                const std::vector<Rational>& ratio, const BalanceOptions& opts = {}) {
  if (labels.size() < 2) throw Error("a ratio restriction needs at least two species");
  if (labels.size() != ratio.size()) throw DimensionError("ratio length does not match species count");
  for (const auto& x : ratio)
    if (sgn(x) <= 0) throw Error("ratio entries must be positive");
  std::vector<std::size_t> idx;
  for (const auto& l : labels) {
    auto i = r.index_of(l);
    if (!i) throw Error("unknown species '" + l + "'");
    if (r.is_reactant(*i) != (side == Side::Reactants)) throw Error("species '" + l + "' is on the other side");
    if (std::find(idx.begin(), idx.end(), *i) != idx.end()) throw Error("species '" + l + "' listed twice");
    idx.push_back(*i);
  }
  auto s = species_system(r, opts);
  const std::size_t n = r.size(), d = s.ambient();

  // Route (b): extra rows r_k a_{i1} - r_1 a_{ik} = 0 on the original balance cone.
  std::vector<Vector> rows;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    Vector row(n);
    row[idx[0]] = ratio[k];
    row[idx[k]] = -ratio[0];
    rows.push_back(row);
  }
  auto q = balance_cone(s.matrix, r.reactants.size(), rows);
  RatioRestriction out;
  out.via_rows_cone_dim = q.dim(n);
  Matrix cr = s.matrix.select_columns(reactant_indices(r));
  std::vector<Vector> images;
  for (const auto& ray : q.rays) images.push_back(cr * ratlin::project(ray, reactant_indices(r)));
  std::size_t image_rank = ratlin::rank(images, d);
  if (image_rank > 0) out.via_rows_intersection_dim = static_cast<int>(image_rank) - 1;

  // Route (a): replace the species by their ratio-weighted combination.
  Integer l = 1;
  for (const auto& x : ratio) l = lcm(l, x.get_den());
  Composition merged;
  std::string label;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    Integer w = Rational(ratio[k] * l).get_num();
    const auto& comp = r.species(idx[k]).composition;
    for (const auto& [sym, cnt] : comp.elements) merged.elements[sym] += cnt * w.get_si();
    merged.charge += comp.charge * w.get_si();
    if (!label.empty()) label += ":";
    label += (w == 1 ? std::string() : w.get_str()) + r.species(idx[k]).label;
  }
  Reaction rep;
  bool placed = false;
  for (std::size_t i = 0; i < n; ++i) {
    bool restricted = std::find(idx.begin(), idx.end(), i) != idx.end();
    auto& dest = r.is_reactant(i) ? rep.reactants : rep.products;
    if (restricted) {
      if (!placed) dest.push_back({label, merged});
      placed = true;
    } else {
      dest.push_back(r.species(i));
    }
  }
  BalanceOptions ropts = opts;
  if (!ropts.element_order) ropts.element_order = s.element_order;
  out.replaced = rep;
  out.via_vertex = classify(rep, ropts);
  out.agree = out.via_vertex.intersection_dim == out.via_rows_intersection_dim &&
              out.via_vertex.balance_cone_dim == out.via_rows_cone_dim;
  return out;
}

struct MixtureComponent {
  Balance component;
  Rational weight;
};

// Decomposes b into uniquely balanced sub-reactions with nonnegative weights.
inline std::vector<MixtureComponent> mixture_decomposition(const Balance& b, const BalanceOptions& opts = {}) {
  const Reaction& r = b.reaction();
  auto s = species_system(r, opts);
  if (!is_zero(s.matrix * b.vector())) throw Error("coefficients do not balance the reaction");
  const std::size_t n = r.size();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i)
    if (b.coefficients()[i] != 0) support.push_back(i);

  // Extreme balances supported inside supp(b): subsets with a one-dimensional
  // nullspace whose generator has the required strict signs.
  std::vector<Vector> candidates;
  const std::size_t k = support.size();
  std::vector<std::size_t> masks;
  for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](std::size_t a, std::size_t c) {
    return __builtin_popcountll(a) < __builtin_popcountll(c);
  });
  for (auto mask : masks) {
    std::vector<std::size_t> sub;
    bool has_r = false, has_p = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (!(mask >> j & 1)) continue;
      sub.push_back(support[j]);
      (r.is_reactant(support[j]) ? has_r : has_p) = true;
    }
    if (!has_r || !has_p) continue;
    auto ns = ratlin::nullspace_basis(s.matrix.select_columns(sub));
    if (ns.size() != 1) continue;
    Vector v = ns.front();
    bool fwd = true, bwd = true;
    for (std::size_t t = 0; t < sub.size(); ++t) {
      int sg = sgn(v[t]);
      int want = r.is_reactant(sub[t]) ? -1 : 1;
      fwd = fwd && sg == want;
      bwd = bwd && sg == -want;
    }
    if (!fwd && !bwd) continue;
    Vector full(n);
    for (std::size_t t = 0; t < sub.size(); ++t) full[sub[t]] = fwd ? v[t] : -v[t];
    candidates.push_back(primitive(full));
  }
  if (candidates.empty()) throw Error("no uniquely balanced sub-reaction found");
  auto w = lp::nonnegative_solution(Matrix::from_columns(candidates, n), b.vector());
  if (!w) throw Error("balance is not a nonnegative combination of extreme balances");
  std::vector<MixtureComponent> out;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (sgn((*w)[c]) != 0) out.push_back({Balance::from_signed(r, candidates[c]), (*w)[c]});
  return out;
}

// Strict integer balances of least total coefficient, searching totals up to max_total.
inline std::vector<Balance> smallest_balances(const Reaction& r, long max_total, const BalanceOptions& opts = {}) {
  auto s = species_system(r, opts);
  const std::size_t n = r.size();
  std::vector<Balance> found;
  std::vector<long> a(n);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long remaining) {
    if (i + 1 == n) {
      a[i] = remaining;
      Vector v(n);
      for (std::size_t j = 0; j < n; ++j) v[j] = r.is_reactant(j) ? -a[j] : a[j];
      if (is_zero(s.matrix * v)) {
        Balance b = Balance::from_signed(r, v);
        bool dup = false;
        for (const auto& f : found) dup = dup || same_balance(f, b);
        if (!dup) found.push_back(b);
      }
      return;
    }
    for (long x = 1; x <= remaining - static_cast<long>(n - i - 1); ++x) {
      a[i] = x;
      rec(i + 1, remaining - x);
    }
  };
  for (long t = static_cast<long>(n); t <= max_total && found.empty(); ++t) rec(0, t);
  return found;
}

}  // namespace stoich::balance
