#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stoich/balance.hpp"
#include "stoich/formula.hpp"

namespace stoich::redox {

using balance::Balance;
using balance::Slice;
using formula::Composition;
using formula::Reaction;
using formula::Species;
using ratlin::Matrix;

enum class Medium { Acidic, Basic };

struct HalfReaction {
  Reaction reaction;
  Medium medium = Medium::Acidic;
};

// --- charge-augmented system -------------------------------------------------

struct ChargeSystem {
  balance::SpeciesSystem system;      // charge row last
  Vector candidate;                   // element sum, minus the charge coordinate when e^- is present
  std::vector<std::size_t> rejected;  // species meeting the candidate non-positively
  std::optional<Slice> slice;         // any valid hyperplane; empty means cone-level fallback
};

inline ChargeSystem charge_system(const Reaction& r, const balance::BalanceOptions& opts = {}) {
  ChargeSystem cs;
  cs.system = balance::species_system(r, opts);
  const Matrix& m = cs.system.matrix;
  const std::size_t e = cs.system.element_order.size();
  cs.candidate.assign(m.rows(), Rational(0));
  for (std::size_t i = 0; i < e; ++i) cs.candidate[i] = 1;
  bool electron = false;
  for (std::size_t i = 0; i < r.size(); ++i) electron = electron || r.species(i).composition.is_electron();
  if (electron && cs.system.with_charge) cs.candidate[e] = -1;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (sgn(dot(cs.candidate, m.col(j))) <= 0) cs.rejected.push_back(j);
  if (cs.rejected.empty()) {
    cs.slice = Slice{cs.candidate, 1};
  } else if (auto y = lp::strictly_positive_direction(m.transpose())) {
    cs.slice = balance::slice_from_direction(*y);
  }
  return cs;
}

// --- spectator ions ----------------------------------------------------------

inline std::string free_symbol(const std::set<std::string>& used, const std::string& base) {
  if (!used.count(base)) return base;
  for (char c = 'a'; c <= 'z'; ++c) {
    std::string s = base + c;
    if (!used.count(s)) return s;
  }
  throw Error("no free spectator symbol");
}

struct SpectatorSystem {
  Reaction original;
  Reaction transformed;
  std::string q_symbol;  // bound once per unit of negative charge
  std::string x_symbol;  // bound once per unit of positive charge
  std::optional<std::size_t> qx_index;

  Balance strip(const Balance& b) const {
    Vector v(original.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < transformed.size(); ++i) {
      if (qx_index && i == *qx_index) continue;
      v[k++] = b.coefficients()[i];
    }
    return Balance::from_signed(original, v);
  }

  std::optional<Balance> lift(const Balance& b) const {
    Vector v(transformed.size());
    Rational q = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < transformed.size(); ++i) {
      if (qx_index && i == *qx_index) continue;
      v[i] = b.coefficients()[k];
      long c = original.species(k).composition.charge;
      if (c < 0) q += v[i] * (-c);
      ++k;
    }
    if (qx_index) {
      v[*qx_index] = -q;
    } else if (sgn(q) != 0) {
      return std::nullopt;
    }
    try {
      return Balance::from_signed(transformed, v);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
};

inline SpectatorSystem spectator_transform(const Reaction& r) {
  r.validate();
  SpectatorSystem s;
  s.original = r;
  std::set<std::string> used;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (const auto& [sym, n] : r.species(i).composition.elements) used.insert(sym);
  s.q_symbol = free_symbol(used, "Q");
  used.insert(s.q_symbol);
  s.x_symbol = free_symbol(used, "X");

  std::set<std::string> labels;
  bool q_r = false, q_p = false, x_r = false, x_p = false;
  auto convert = [&](const Species& sp, bool reactant) {
    Composition c = sp.composition;
    if (c.charge == 0) {
      labels.insert(sp.label);
      return sp;
    }
    if (c.charge > 0) {
      c.elements[s.x_symbol] += c.charge;
      (reactant ? x_r : x_p) = true;
    } else {
      c.elements[s.q_symbol] += -c.charge;
      (reactant ? q_r : q_p) = true;
    }
    c.charge = 0;
    std::string label = formula::render(c);
    while (labels.count(label)) label += "'";
    labels.insert(label);
    return Species{label, c};
  };
  for (const auto& sp : r.reactants) s.transformed.reactants.push_back(convert(sp, true));
  for (const auto& sp : r.products) s.transformed.products.push_back(convert(sp, false));

  bool q_any = q_r || q_p, x_any = x_r || x_p;
  bool one_sided = (q_any && q_r != q_p) || (x_any && x_r != x_p);
  if (one_sided) {
    Composition qx;
    qx.elements[s.q_symbol] = 1;
    qx.elements[s.x_symbol] = 1;
    std::string label = formula::render(qx);
    while (labels.count(label)) label += "'";
    // Products by default; reactants only when the lone spectator sits among the products.
    bool to_reactants = (q_p && !q_r && !(x_r && !x_p)) || (x_p && !x_r && !(q_r && !q_p));
    if (to_reactants) {
      s.transformed.reactants.push_back({label, qx});
      s.qx_index = s.transformed.reactants.size() - 1;
    } else {
      s.transformed.products.push_back({label, qx});
      s.qx_index = s.transformed.size() - 1;
    }
  }
  return s;
}

// --- half-reaction recipe ----------------------------------------------------

namespace detail {

inline Composition water() { return formula::parse_formula("H2O"); }
inline Composition proton() { return formula::parse_formula("H^+"); }
inline Composition hydroxide() { return formula::parse_formula("OH^-"); }
inline Composition electron() { return formula::parse_formula("e^-"); }

inline bool is_medium(const Composition& c) {
  return c == water() || c == proton() || c == hydroxide() || c == electron();
}

struct Term {
  Species species;
  Rational coef;  // negative: reactant side
};

inline Rational signed_sum(const std::vector<Term>& terms, const std::string& element) {
  Rational s = 0;
  for (const auto& t : terms) {
    auto it = t.species.composition.elements.find(element);
    if (it != t.species.composition.elements.end()) s += t.coef * it->second;
  }
  return s;
}

inline Rational charge_sum(const std::vector<Term>& terms) {
  Rational s = 0;
  for (const auto& t : terms) s += t.coef * t.species.composition.charge;
  return s;
}

inline void add(std::vector<Term>& terms, const Species& sp, const Rational& c) {
  for (auto& t : terms) {
    if (t.species.label == sp.label) {
      t.coef += c;
      return;
    }
  }
  terms.push_back({sp, c});
}

inline Balance to_balance(const std::vector<Term>& terms) {
  Reaction r;
  Vector coeffs;
  for (const auto& t : terms)
    if (sgn(t.coef) < 0) r.reactants.push_back(t.species);
  for (const auto& t : terms)
    if (sgn(t.coef) > 0) r.products.push_back(t.species);
  if (r.reactants.empty() || r.products.empty()) throw Error("degenerate combination: a side cancels completely");
  for (const auto& t : terms)
    if (sgn(t.coef) < 0) coeffs.push_back(t.coef);
  for (const auto& t : terms)
    if (sgn(t.coef) > 0) coeffs.push_back(t.coef);
  return Balance::from_signed(r, coeffs);
}

inline std::vector<Term> terms_of(const Balance& b) {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < b.reaction().size(); ++i)
    if (b.coefficients()[i] != 0) terms.push_back({b.reaction().species(i), Rational(b.coefficients()[i])});
  return terms;
}

inline Reaction strip_medium(const Reaction& r) {
  Reaction out;
  for (const auto& s : r.reactants)
    if (!is_medium(s.composition)) out.reactants.push_back(s);
  for (const auto& s : r.products)
    if (!is_medium(s.composition)) out.products.push_back(s);
  return out;
}

inline std::vector<std::string> heavy_elements(const Reaction& r) {
  std::vector<std::string> out;
  for (const auto& e : formula::element_order(r))
    if (e != "H" && e != "O") out.push_back(e);
  return out;
}

// Steps (2)-(5) applied to a step-(1) assignment.
inline std::vector<Term> lift_medium(std::vector<Term> terms, Medium medium) {
  Rational so = signed_sum(terms, "O");
  if (sgn(so) != 0) add(terms, {"H2O", water()}, -so);
  Rational sh = signed_sum(terms, "H");
  if (sgn(sh) != 0) add(terms, {"H^+", proton()}, -sh);
  if (medium == Medium::Basic) {
    Rational h = 0;
    for (const auto& t : terms)
      if (t.species.label == "H^+") h = t.coef;
    if (sgn(h) != 0) {
      add(terms, {"H^+", proton()}, -h);
      add(terms, {"H2O", water()}, h);
      add(terms, {"OH^-", hydroxide()}, -h);
    }
  }
  Rational sq = charge_sum(terms);
  if (sgn(sq) != 0) add(terms, {"e^-", electron()}, sq);
  std::vector<Term> out;
  for (auto& t : terms)
    if (sgn(t.coef) != 0) out.push_back(t);
  return out;
}

struct StepOne {
  std::vector<std::vector<Term>> assignments;  // one per extreme step-(1) balance
  bool unique = false;
  bool strict = false;
};

inline StepOne step_one(const Reaction& stripped) {
  StepOne out;
  std::vector<std::string> heavy = heavy_elements(stripped);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < stripped.size(); ++i) {
    bool has = false;
    for (const auto& e : heavy) has = has || stripped.species(i).composition.elements.count(e);
    if (has) active.push_back(i);
  }
  auto base = [&]() {
    std::vector<Term> t;
    for (std::size_t i = 0; i < stripped.size(); ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      t.push_back({stripped.species(i), Rational(stripped.is_reactant(i) ? -1 : 1)});
    }
    return t;
  };
  if (active.empty()) {
    out.assignments.push_back(base());
    out.unique = out.strict = true;
    return out;
  }
  std::size_t reactants = 0;
  for (auto i : active) reactants += stripped.is_reactant(i) ? 1 : 0;
  if (reactants == 0 || reactants == active.size()) return out;
  std::vector<Vector> cols;
  for (auto i : active) {
    const auto& els = stripped.species(i).composition.elements;
    Vector v;
    for (const auto& e : heavy) {
      auto it = els.find(e);
      v.emplace_back(it == els.end() ? 0L : it->second);
    }
    cols.push_back(v);
  }
  Matrix m = Matrix::from_columns(cols, heavy.size());
  auto q = balance::balance_cone(m, reactants);
  if (q.rays.empty()) return out;
  out.unique = q.dim(active.size()) == 1;
  for (const auto& ray : q.rays) {
    Vector v = primitive(ray);
    std::vector<Term> t;
    bool strict = true;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (sgn(v[k]) == 0) strict = false;
      t.push_back({stripped.species(active[k]), v[k]});
    }
    auto b = base();
    t.insert(t.end(), b.begin(), b.end());
    out.assignments.push_back(t);
    if (out.unique) out.strict = strict;
  }
  return out;
}

}  // namespace detail

struct HalfReactionBalance {
  Balance balance;
  Integer electrons;  // signed e^- coefficient: positive when released
  bool ambiguous = false;
  std::vector<Balance> alternatives;  // extreme alternatives when step (1) is not unique
};

inline Integer electron_coefficient(const Balance& b) {
  for (std::size_t i = 0; i < b.reaction().size(); ++i)
    if (b.reaction().species(i).composition.is_electron()) return b.coefficients()[i];
  return 0;
}

inline HalfReactionBalance balance_half_reaction(const HalfReaction& h) {
  h.reaction.validate();
  Reaction stripped = detail::strip_medium(h.reaction);
  if (stripped.reactants.empty() && stripped.products.empty()) throw Error("half-reaction has only medium species");
  auto s1 = detail::step_one(stripped);
  if (s1.assignments.empty()) throw balance::NoBalanceError("step (1) admits no balance");
  HalfReactionBalance out;
  for (const auto& a : s1.assignments) out.alternatives.push_back(detail::to_balance(detail::lift_medium(a, h.medium)));
  out.ambiguous = !s1.unique;
  out.balance = out.alternatives.front();
  out.electrons = electron_coefficient(out.balance);
  if (!out.ambiguous) out.alternatives.clear();
  return out;
}

inline Balance combine_half_reactions(const Balance& ox, const Balance& red) {
  Integer ea = electron_coefficient(ox), eb = electron_coefficient(red);
  if (ea == 0 || eb == 0) throw Error("a half-reaction without electrons cannot be combined");
  if (sgn(ea) == sgn(eb)) throw Error("electrons appear on the same side of both half-reactions");
  Integer l = lcm(Integer(abs(ea)), Integer(abs(eb)));
  Integer ma = l / abs(ea), mb = l / abs(eb);
  std::vector<detail::Term> terms;
  for (const auto& t : detail::terms_of(ox)) detail::add(terms, t.species, t.coef * Rational(ma));
  for (const auto& t : detail::terms_of(red)) detail::add(terms, t.species, t.coef * Rational(mb));
  std::vector<detail::Term> kept;
  for (auto& t : terms)
    if (sgn(t.coef) != 0) kept.push_back(t);
  if (kept.empty()) throw Error("degenerate combination: all coefficients cancel");
  return detail::to_balance(kept);
}

struct HalfReactionSplit {
  Reaction first;
  Reaction second;
};

// Sub-reactions (proper subsets of each side) whose step (1) balances uniquely and strictly.
inline std::vector<Reaction> half_reaction_candidates(const Reaction& r) {
  Reaction s = detail::strip_medium(r);
  const std::size_t nr = s.reactants.size(), np = s.products.size();
  std::vector<std::pair<std::size_t, std::size_t>> masks;
  for (std::size_t a = 1; a < (std::size_t(1) << nr); ++a)
    for (std::size_t b = 1; b < (std::size_t(1) << np); ++b) masks.push_back({a, b});
  std::stable_sort(masks.begin(), masks.end(), [](const auto& x, const auto& y) {
    return __builtin_popcountll(x.first) + __builtin_popcountll(x.second) <
           __builtin_popcountll(y.first) + __builtin_popcountll(y.second);
  });
  std::vector<Reaction> out;
  const std::size_t full_r = (std::size_t(1) << nr) - 1, full_p = (std::size_t(1) << np) - 1;
  for (const auto& [a, b] : masks) {
    if (a == full_r && b == full_p) continue;
    Reaction sub;
    for (std::size_t i = 0; i < nr; ++i)
      if (a >> i & 1) sub.reactants.push_back(s.reactants[i]);
    for (std::size_t j = 0; j < np; ++j)
      if (b >> j & 1) sub.products.push_back(s.products[j]);
    auto s1 = detail::step_one(sub);
    if (s1.unique && s1.strict) out.push_back(sub);
  }
  return out;
}

namespace detail {

// Every label in `needed` occurs on the same side of a or b.
inline bool covers(const Reaction& whole, const Reaction& a, const Reaction& b, const std::set<std::string>& needed) {
  auto has = [](const std::vector<Species>& v, const std::string& l) {
    for (const auto& s : v)
      if (s.label == l) return true;
    return false;
  };
  for (const auto& s : whole.reactants)
    if (needed.count(s.label) && !has(a.reactants, s.label) && !has(b.reactants, s.label)) return false;
  for (const auto& s : whole.products)
    if (needed.count(s.label) && !has(a.products, s.label) && !has(b.products, s.label)) return false;
  return true;
}

// Species occurring in some balance of r; all species when r has none.
inline std::set<std::string> live_species(const Reaction& r) {
  std::set<std::string> out;
  try {
    auto b = balance::generic_balance(r);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (b.coefficients()[i] != 0) out.insert(r.species(i).label);
  } catch (const Error&) {
    for (const auto& l : r.labels()) out.insert(l);
  }
  return out;
}

}  // namespace detail

inline std::vector<HalfReactionSplit> enumerate_half_reaction_splits(const Reaction& r) {
  Reaction s = detail::strip_medium(r);
  auto cands = half_reaction_candidates(r);
  auto needed = detail::live_species(r);
  std::vector<HalfReactionSplit> out;
  for (std::size_t i = 0; i < cands.size(); ++i)
    for (std::size_t j = i + 1; j < cands.size(); ++j)
      if (detail::covers(s, cands[i], cands[j], needed)) out.push_back({cands[i], cands[j]});
  if (out.empty()) out.push_back({s, s});
  return out;
}

inline std::vector<Balance> half_reaction_reachable_balances(const Reaction& r, Medium medium) {
  std::vector<Balance> out;
  auto push = [&](const Balance& b) {
    for (const auto& o : out)
      if (balance::same_balance(o, b)) return;
    out.push_back(b);
  };
  for (const auto& split : enumerate_half_reaction_splits(r)) {
    std::vector<Balance> as, bs;
    try {
      auto ha = balance_half_reaction({split.first, medium});
      auto hb = balance_half_reaction({split.second, medium});
      as = ha.ambiguous ? ha.alternatives : std::vector<Balance>{ha.balance};
      bs = hb.ambiguous ? hb.alternatives : std::vector<Balance>{hb.balance};
    } catch (const Error&) {
      continue;
    }
    bool trivial = split.first.size() == split.second.size() &&
                   split.first.labels() == split.second.labels();
    for (const auto& a : as) {
      for (const auto& b : bs) {
        Integer ea = electron_coefficient(a), eb = electron_coefficient(b);
        if (trivial) {
          // One half-reaction: pick step-(1) balances whose electrons cancel.
          if (ea == 0) {
            push(a);
          } else if (eb != 0 && sgn(ea) != sgn(eb)) {
            try {
              push(combine_half_reactions(a, b));
            } catch (const Error&) {
            }
          }
          continue;
        }
        if (ea == 0 && eb == 0) {
          std::vector<detail::Term> terms = detail::terms_of(a);
          for (const auto& t : detail::terms_of(b)) detail::add(terms, t.species, t.coef);
          try {
            push(detail::to_balance(terms));
          } catch (const Error&) {
          }
          continue;
        }
        // A half without electrons is already a balance; weight zero on the other half.
        if (ea == 0 || eb == 0) {
          push(ea == 0 ? a : b);
          continue;
        }
        if (sgn(ea) == sgn(eb)) continue;
        try {
          push(combine_half_reactions(a, b));
        } catch (const Error&) {
        }
      }
    }
  }
  return out;
}

}  // namespace stoich::redox
