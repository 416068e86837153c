#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stoich/balance.hpp"
#include "stoich/formula.hpp"
#include "stoich/lattice.hpp"
#include "stoich/mechanism.hpp"
#include "stoich/ratlin.hpp"
#include "stoich/redox.hpp"

namespace stoich::corpus {

using ratlin::Matrix;
using ratlin::Subspace;

inline Matrix int_matrix(const std::vector<std::vector<long>>& rows) {
  std::vector<Vector> r;
  for (const auto& x : rows) r.push_back(to_vector(x));
  return Matrix::from_rows(r, rows.empty() ? 0 : rows.front().size());
}

// --- datasets -----------------------------------------------------------------

namespace data {

inline mechanism::Mechanism azomethane() {
  return {{"C2H6N2", "N2", "CH4", "C2H6", "C3H8N2", "C4H12N2", "X", "Y", "Z"},
          {0, 1, 2, 3, 4, 5},
          {6, 7, 8},
          int_matrix({{-1, -1, 0, 0, -1, 0},
                      {1, 0, 0, 0, 0, 0},
                      {0, 1, 0, 0, 0, 0},
                      {0, 0, 1, 0, 0, 0},
                      {0, 0, 0, 1, 0, 0},
                      {0, 0, 0, 0, 0, 1},
                      {2, -1, -2, -1, -1, -1},
                      {0, 1, 0, -1, 0, 0},
                      {0, 0, 0, 0, 1, -1}})};
}

// Elements C, H, N; intermediates X = CH3, Y = C2H5N2, Z = C3H9N2.
inline Matrix azomethane_elements() {
  return int_matrix({{2, 0, 1, 2, 3, 4, 1, 2, 3}, {6, 0, 4, 6, 8, 12, 3, 5, 9}, {2, 2, 0, 0, 2, 2, 0, 2, 2}});
}

inline Subspace azomethane_observed() {
  return Subspace::row_space(int_matrix({{-1, -3, 1, 2, 0, 1}, {2, 4, 0, -2, 0, 0}, {0, 0, -1, 0, 1, 0}}));
}

// Twelve species, eight known and four intermediates.
inline Matrix second_elements() {
  return int_matrix({{2, 0, 0, 1, 0, 2, 2, 2, 2, 1, 1, 1},
                     {1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0},
                     {1, 0, 0, 0, 1, 1, 2, 0, 1, 1, 1, 0},
                     {0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0},
                     {0, 3, 2, 1, 0, 0, 0, 0, 3, 0, 0, 0}});
}

inline Subspace second_observed() {
  return Subspace::row_space(int_matrix({{1, 0, 0, 0, 1, 0, 0, 1},
                                         {0, 1, 0, 0, 2, 0, 0, 0},
                                         {0, 0, 1, 0, -2, 0, 0, 0},
                                         {0, 0, 0, 1, -2, 0, 0, 0},
                                         {0, 0, 0, 0, 0, 1, 0, 1},
                                         {0, 0, 0, 0, 0, 0, 1, -1}}));
}

inline Matrix second_mechanism() {
  return int_matrix({{-1, 0, 0, 1, 0, -1, -1, -1},
                     {-1, 0, -1, 0, 0, 0, 0, 0},
                     {0, 1, 1, 0, 0, 0, 0, 0},
                     {0, 1, 1, 0, 0, 0, 0, 0},
                     {0, 0, 1, 0, 0, 0, 0, 0},
                     {0, 0, 0, -1, -1, 1, 0, 0},
                     {0, 0, 0, 0, 1, 0, 1, 0},
                     {0, 0, 0, 0, 0, 0, 0, 1},
                     {1, -1, 0, 0, 0, 0, 0, 0},
                     {0, 1, -1, -1, -1, 1, 0, 1},
                     {0, 0, 0, 1, 0, -1, -1, 0},
                     {0, 0, 0, 0, 1, 0, 1, -1}});
}

inline geometry::Polytope scaled_quadrilateral() {
  return geometry::Polytope::from_points(
      3, {to_vector(std::vector<long>{15, 15, 6}), to_vector(std::vector<long>{16, 10, 10}),
          to_vector(std::vector<long>{10, 16, 10}), to_vector(std::vector<long>{12, 12, 12})});
}

}  // namespace data

// --- random inputs ------------------------------------------------------------

// Neutral reaction over two or three elements with 2..6 distinct species, counts 0..4.
inline formula::Reaction random_reaction(std::mt19937_64& rng) {
  static const char* symbols[] = {"A", "B", "C"};
  std::uniform_int_distribution<int> nel(2, 3), nsp(2, 6), cnt(0, 4);
  const int e = nel(rng), n = nsp(rng);
  std::vector<formula::Species> sp;
  std::set<std::string> seen;
  while (static_cast<int>(sp.size()) < n) {
    formula::Composition c;
    for (int k = 0; k < e; ++k) {
      int x = cnt(rng);
      if (x > 0) c.elements[symbols[k]] = x;
    }
    if (c.elements.empty()) continue;
    std::string label = formula::render(c);
    if (!seen.insert(label).second) continue;
    sp.push_back({label, c});
  }
  std::uniform_int_distribution<int> split(1, n - 1);
  int r = split(rng);
  formula::Reaction rx;
  rx.reactants.assign(sp.begin(), sp.begin() + r);
  rx.products.assign(sp.begin() + r, sp.end());
  return rx;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

// --- checks -------------------------------------------------------------------

struct CheckResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct Check {
  int id;
  std::string title;
  double time_limit;  // seconds; 0 means none
  std::function<bool(std::string&)> run;
};

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

inline balance::Balance expected(const std::string& equation) {
  auto pe = formula::parse_equation(equation);
  Vector v(pe.reaction.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    long c = pe.coefficients[i].value_or(1);
    v[i] = pe.reaction.is_reactant(i) ? -c : c;
  }
  return balance::Balance::from_signed(pe.reaction, v);
}

inline std::string dims(const mechanism::DimensionTable& t) {
  std::ostringstream s;
  s << t.ns << "/" << t.rs << "/" << t.k << "/" << t.pk_ns << "/" << t.pk_rs << "/" << t.intersection << "/" << t.o
    << "/" << t.o_mod_pk_rs << "/" << t.pu_rs;
  return s.str();
}

inline bool no_balance(std::string& d) {
  auto r = formula::parse_reaction("XY + YZ -> XYZ2");
  auto c = balance::classify(r);
  d = "kind: " + balance::to_string(c.kind) + ", dim NS(M) = " + std::to_string(c.moduli_dim);
  return c.kind == balance::BalanceKind::NoBalance && c.moduli_dim == 0;
}

inline bool nullspace_span(std::string& d) {
  Matrix m = int_matrix({{1, 0, 1, 1, 0, 5}, {0, 1, 1, 0, 1, 5}, {0, 0, 1, 1, 1, 2}});
  Subspace ns = Subspace::null_space(m);
  Subspace ref = Subspace::span(6, {to_vector(std::vector<long>{0, 1, -1, 1, 0, 0}),
                                    to_vector(std::vector<long>{1, 0, -1, 0, 1, 0}),
                                    to_vector(std::vector<long>{-3, -3, -2, 0, 0, 1})});
  d = "dim " + std::to_string(ns.dim()) + (ns == ref ? ", spans agree" : ", spans differ");
  return ns.dim() == 3 && ns == ref;
}

inline bool quadrilateral(std::string& d) {
  auto r = formula::parse_reaction("X + Y + XYZ -> XZ + YZ + X5Y5Z2");
  auto g = balance::reaction_geometry(r);
  auto a = balance::balance_at(r, {rational(3, 8), rational(3, 8), rational(1, 4)});
  auto b = balance::balance_at(r, {rational(2, 5), rational(2, 5), rational(1, 5)});
  auto ea = expected("2 X + 2 Y + 4 XYZ -> XZ + YZ + X5Y5Z2");
  auto eb = expected("8 X + 8 Y + 8 XYZ -> XZ + YZ + 3 X5Y5Z2");
  bool ok = g.intersection.dim() == 2 && g.intersection.vertices().size() == 4 && balance::same_balance(a.balance, ea) &&
            balance::same_balance(b.balance, eb) && !balance::same_balance(a.balance, b.balance);
  d = "intersection dim " + std::to_string(g.intersection.dim()) + " with " +
      std::to_string(g.intersection.vertices().size()) + " vertices; " + a.balance.to_string() + " | " +
      b.balance.to_string();
  return ok;
}

inline bool interior_counts(std::string& d) {
  auto p = data::scaled_quadrilateral();
  auto c1 = lattice::denominator_bounded_count(p, 1);
  auto c2 = lattice::denominator_bounded_count(p, 2);
  bool ok = c1.interior == 16 && c2.interior == 33;
  std::string poly = "(fit failed)";
  try {
    auto fit = lattice::fit_count_polynomial(p, true);
    poly = fit.polynomial.to_string();
    lattice::Polynomial want{{Rational(1), Rational(14), Rational(1)}};
    ok = ok && fit.polynomial.coefficients == want.coefficients;
  } catch (const Error& e) {
    poly = e.what();
    ok = false;
  }
  d = "interior(1) = " + c1.interior.get_str() + " (want 16), interior(2) = " + c2.interior.get_str() +
      " (want 33), fitted " + poly + " (want n^2 + 14n + 1)";
  return ok;
}

inline bool allotropes(std::string& d) {
  auto r = formula::parse_reaction("NO + O3 -> NO2 + O2");
  balance::BalanceOptions o;
  o.element_order = std::vector<std::string>{"O", "N"};
  auto g = balance::reaction_geometry(r, o);
  std::vector<Vector> want{{rational(2, 3), rational(1, 3)}, {Rational(1), Rational(0)}};
  bool seg = g.intersection.dim() == 1 && g.intersection.vertices() == want;
  auto t5 = balance::balance_at(r, {rational(4, 5), rational(1, 5)}, o);
  auto t4 = balance::balance_at(r, {rational(3, 4), rational(1, 4)}, o);
  bool ok = seg && balance::same_balance(t5.balance, expected("NO + O3 -> NO2 + O2")) &&
            balance::same_balance(t4.balance, expected("6 NO + 4 O3 -> 6 NO2 + 3 O2"));
  d = std::string(seg ? "segment t in [0, 1/3]" : "unexpected intersection") + "; t=1/5: " + t5.balance.to_string() +
      "; t=1/4: " + t4.balance.to_string();
  return ok;
}

inline bool ratio_restriction(std::string& d) {
  auto r = formula::parse_reaction("H2SO4 + KMnO4 + H2O2 -> K2SO4 + MnSO4 + O2 + H2O");
  auto before = balance::classify(r);
  auto rr = balance::apply_ratio_restriction(r, balance::Side::Reactants, {"KMnO4", "H2O2"}, {Rational(2), Rational(5)});
  auto show = [](std::optional<int> x) { return x ? std::to_string(*x) : std::string("none"); };
  d = "before " + show(before.intersection_dim) + ", after (vertex) " + show(rr.via_vertex.intersection_dim) +
      ", after (row) " + show(rr.via_rows_intersection_dim);
  return before.intersection_dim == 1 && rr.via_vertex.intersection_dim == 0 && rr.via_rows_intersection_dim == 0 &&
         rr.agree;
}

inline bool mixtures(std::string& d) {
  std::mt19937_64 rng(20240601);
  int done = 0, attempts = 0, failures = 0;
  while (done < 200 && attempts < 100000) {
    ++attempts;
    auto r = random_reaction(rng);
    auto s = balance::species_system(r);
    auto q = balance::balance_cone(s.matrix, r.reactants.size());
    if (q.rays.empty()) continue;
    auto b = balance::generic_balance(r);
    ++done;
    auto parts = balance::mixture_decomposition(b);
    Vector sum(r.size());
    bool ok = !parts.empty();
    for (const auto& p : parts) {
      if (sgn(p.weight) <= 0) ok = false;
      std::vector<std::size_t> supp;
      for (std::size_t i = 0; i < r.size(); ++i)
        if (p.component.coefficients()[i] != 0) supp.push_back(i);
      if (Subspace::null_space(s.matrix.select_columns(supp)).dim() != 1) ok = false;
      for (std::size_t i = 0; i < r.size(); ++i) sum[i] += p.weight * p.component.vector()[i];
    }
    if (sum != b.vector()) ok = false;
    if (!ok) ++failures;
  }
  d = std::to_string(done) + " balanceable reactions, " + std::to_string(failures) + " failures";
  return done == 200 && failures == 0;
}

inline bool gold(std::string& d) {
  using redox::Medium;
  const std::vector<std::pair<std::string, std::string>> table{
      {"Au + CN^- -> [Au(CN)2]^-", "Au + 2 CN^- -> [Au(CN)2]^- + e^-"},
      {"Au + CN^- + O2 -> [Au(CN)2]^-", "3 e^- + 2 H2O + Au + 2 CN^- + O2 -> [Au(CN)2]^- + 4 OH^-"},
      {"Au + CN^- -> [Au(CN)2]^- + H2O2", "Au + 2 CN^- + 2 OH^- -> [Au(CN)2]^- + H2O2 + 3 e^-"},
      {"O2 -> H2O2", "2 e^- + 2 H2O + O2 -> H2O2 + 2 OH^-"}};
  bool ok = true;
  std::vector<std::string> got;
  for (const auto& [raw, want] : table) {
    auto h = redox::balance_half_reaction({formula::parse_reaction(raw), Medium::Basic});
    if (!balance::same_balance(h.balance, expected(want)) || h.ambiguous) ok = false;
    got.push_back(h.balance.to_string());
  }
  auto ox = redox::balance_half_reaction({formula::parse_reaction(table[0].first), Medium::Basic}).balance;
  auto red = redox::balance_half_reaction({formula::parse_reaction(table[3].first), Medium::Basic}).balance;
  auto overall = redox::combine_half_reactions(ox, red);
  auto k = overall.key();
  bool ratio = k.count("H2O") && k.count("OH^-") && k["H2O"] == -k["OH^-"];
  auto r = formula::parse_reaction("Au + CN^- + O2 + H2O -> [Au(CN)2]^- + H2O2 + OH^-");
  auto reach = redox::half_reaction_reachable_balances(r, Medium::Basic);
  auto other = expected("2 Au + 4 CN^- + 2 O2 + 4 H2O -> 2 [Au(CN)2]^- + 3 H2O2 + 2 OH^-");
  bool absent = balance::conserves(other);
  for (const auto& b : reach) absent = absent && !balance::same_balance(b, other);
  d = join(got, "; ") + "; overall " + overall.to_string() + (absent ? "; t=3/5 member unreachable" : "; t=3/5 member reachable");
  return ok && ratio && absent;
}

inline bool dimension_identity_pairs(std::string& d) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  int bad = 0;
  for (int t = 0; t < 500; ++t) {
    std::size_t n = dim(rng), a = dim(rng), b = dim(rng);
    Matrix A = random_matrix(rng, n, a, 3), B = random_matrix(rng, n, b, 3);
    std::size_t lhs = Subspace::null_space(ratlin::hstack(A, B)).dim();
    std::size_t rhs = ratlin::intersection(Subspace::column_space(A), Subspace::column_space(B)).dim() +
                      Subspace::null_space(A).dim() + Subspace::null_space(B).dim();
    if (lhs != rhs) ++bad;
  }
  d = "500 pairs, " + std::to_string(bad) + " violations";
  return bad == 0;
}

inline bool mass_conservation(std::string& d) {
  mechanism::Mechanism m{{"S1", "S2", "S3"}, {0, 1, 2}, {}, int_matrix({{-1, -1}, {1, -1}, {1, 2}})};
  auto rep = mechanism::conservation_report(m);
  Subspace want = Subspace::span(3, {to_vector(std::vector<long>{3, 1, 2})});
  d = "dim NS(N^T) = " + std::to_string(rep.mass_space.dim()) + (rep.conservative ? ", conservative" : ", not conservative");
  return rep.mass_space == want && rep.conservative;
}

inline bool consistent(std::string& d) {
  auto m = data::azomethane();
  auto c = mechanism::consistent_reactions(m, 6);
  auto region = mechanism::consistent_region(m, 6);
  d = std::to_string(c.count()) + " lattice points (want 35); region dim " + std::to_string(region.dim()) +
      " (want 6) with " + std::to_string(region.vertices().size()) + " vertices (want 14)";
  return c.count() == 35 && region.dim() == 6 && region.vertices().size() == 14;
}

inline bool representation(std::string& d) {
  auto m = data::azomethane();
  auto reps = mechanism::algebraic_representations(m, to_vector(std::vector<long>{-5, 3, 1, 1, 1, 1}));
  IntVector want;
  for (long x : {3, 1, 1, 1, 1, 1}) want.push_back(x);
  bool finite = mechanism::representations_finite(m);
  d = std::to_string(reps.size()) + " representation(s)" + (finite ? ", finite" : ", infinite");
  return finite && reps.size() == 1 && reps.front() == want;
}

inline bool dimension_tables(std::string& d) {
  auto a = mechanism::inverse_mechanism_spaces(9, {0, 1, 2, 3, 4, 5}, {6, 7, 8}, data::azomethane_elements(),
                                               data::azomethane_observed(), false);
  auto b = mechanism::inverse_mechanism_spaces(12, {0, 1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11}, data::second_elements(),
                                               data::second_observed(), false);
  mechanism::DimensionTable wa{6, 3, 6, 6, 3, 3, 3, 0, 3}, wb{7, 5, 8, 7, 5, 4, 6, 1, 5};
  auto same = [](const mechanism::DimensionTable& x, const mechanism::DimensionTable& y) { return dims(x) == dims(y); };
  d = "azomethane " + dims(a.table) + " (want " + dims(wa) + "); second " + dims(b.table) + " (want " + dims(wb) + ")";
  return same(a.table, wa) && same(b.table, wb);
}

inline bool observed_projection(std::string& d) {
  auto r = mechanism::inverse_mechanism_spaces(12, {0, 1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11}, data::second_elements(),
                                               data::second_observed(), false);
  Vector v{Rational(1),        rational(-12, 23), rational(12, 23),  rational(12, 23),
           rational(-49, 23), rational(-26, 23), rational(26, 23),  rational(-29, 23)};
  Subspace want = Subspace::span(8, {v});
  d = "dim proj_Z O = " + std::to_string(r.proj_z_o.dim()) + (r.proj_z_o == want ? ", matches" : ", differs");
  return r.proj_z_o == want;
}

inline bool precedence(std::string& d) {
  auto m = data::azomethane();
  auto p = mechanism::precedence_analysis(m);
  std::vector<std::set<std::size_t>> want{{0}, {0, 1}, {0, 1, 2, 3}};
  auto cand = mechanism::candidate_elementary_reactions(Subspace::null_space(data::azomethane_elements()), 1);
  std::vector<std::string> it;
  for (const auto& s : p.iterates) {
    std::vector<std::string> names;
    for (auto v : s) names.push_back(p.vertex_names[v]);
    it.push_back("{" + join(names) + "}");
  }
  d = "iterates " + join(it, " ") + "; " + std::to_string(cand.vectors.size()) + " vectors / " +
      std::to_string(cand.lines.size()) + " lines";
  return p.iterates == want && cand.vectors.size() == 116 && cand.lines.size() == 58;
}

inline bool classification_routes(std::string& d) {
  std::mt19937_64 rng(99);
  int bad_identity = 0, bad_routes = 0;
  for (int t = 0; t < 500; ++t) {
    auto r = random_reaction(rng);
    auto c = balance::classify(r);
    if (!c.dimension_identity_holds()) ++bad_identity;
    if (!c.routes_agree()) ++bad_routes;
  }
  d = "500 reactions, " + std::to_string(bad_identity) + " identity violations, " + std::to_string(bad_routes) +
      " disagreements";
  return bad_identity == 0 && bad_routes == 0;
}

}  // namespace detail

inline std::vector<Check> checks() {
  return {
      {1, "XY + YZ -> XYZ2 admits no balance", 0.001, detail::no_balance},
      {2, "nullspace of the XYZ elemental matrix matches the reference span", 0, detail::nullspace_span},
      {3, "quadrilateral intersection and two distinct interior balances", 0, detail::quadrilateral},
      {4, "interior lattice counts and fitted polynomial of the scaled quadrilateral", 1.0, detail::interior_counts},
      {5, "NO + O3 segment and balances at t = 1/5 and t = 1/4", 0, detail::allotropes},
      {6, "KMnO4:H2O2 = 2:5 restriction drops the intersection dimension", 0, detail::ratio_restriction},
      {7, "mixture decompositions of 200 random balanceable reactions", 30.0, detail::mixtures},
      {8, "gold cyanidation half-reactions and reachable overall balances", 0, detail::gold},
      {9, "dimension identity on 500 random matrix pairs", 0, detail::dimension_identity_pairs},
      {10, "mass conservation of the three-species mechanism", 0, detail::mass_conservation},
      {11, "azomethane consistent reactions with at most six species", 60.0, detail::consistent},
      {12, "unique representation of the azomethane overall reaction", 0, detail::representation},
      {13, "inverse-problem dimension tables", 0, detail::dimension_tables},
      {14, "projection of the observed restrictions onto Z", 0, detail::observed_projection},
      {15, "azomethane precedence iterates and candidate elementary reactions", 10.0, detail::precedence},
      {16, "classification identity and route agreement on 500 random reactions", 0, detail::classification_routes},
  };
}

inline CheckResult run_check(const Check& c) {
  CheckResult r;
  r.id = c.id;
  r.title = c.title;
  auto t0 = std::chrono::steady_clock::now();
  try {
    r.passed = c.run(r.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.time_limit > 0 && r.seconds >= c.time_limit) {
    r.passed = false;
    r.detail += "; exceeded time limit";
  }
  return r;
}

inline std::string format(const CheckResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << " [" << (r.id < 10 ? " " : "") << r.id << "] " << r.title << " -- "
    << r.detail << " (" << static_cast<long>(r.seconds * 1000) << " ms)";
  return s.str();
}

}  // namespace stoich::corpus
