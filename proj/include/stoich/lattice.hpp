#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "stoich/geometry.hpp"

namespace stoich::lattice {

using geometry::Location;
using geometry::Polytope;

// Integer points of P (relative interior only when requested), in lexicographic order.
inline std::vector<IntVector> lattice_points(const Polytope& p, bool interior_only = false) {
  std::vector<IntVector> out;
  if (p.is_empty()) return out;
  const std::size_t d = p.ambient_dim();
  IntVector lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    Rational mn = p.vertices().front()[i], mx = mn;
    for (const auto& v : p.vertices()) {
      if (v[i] < mn) mn = v[i];
      if (v[i] > mx) mx = v[i];
    }
    lo[i] = ceil_of(mn);
    hi[i] = floor_of(mx);
    if (lo[i] > hi[i]) return out;
  }
  Vector x(d);
  IntVector xi(d);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      Location loc = p.locate(x);
      if (loc == Location::Outside) return;
      if (interior_only && loc != Location::RelativeInterior) return;
      out.push_back(xi);
      return;
    }
    for (Integer z = lo[i]; z <= hi[i]; ++z) {
      xi[i] = z;
      x[i] = z;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

struct DenominatorCount {
  Integer all;       // boundary inclusive
  Integer interior;  // relative interior
};

// Points x of P with n x integral: the lattice points of nP.
inline DenominatorCount denominator_bounded_count(const Polytope& p, long n) {
  if (n < 0) throw Error("denominator bound must be nonnegative");
  if (n == 0) return {1, 1};
  Polytope scaled = p.scaled(Rational(n));
  return {Integer(static_cast<unsigned long>(lattice_points(scaled, false).size())),
          Integer(static_cast<unsigned long>(lattice_points(scaled, true).size()))};
}

// Polynomial with rational coefficients, lowest degree first.
struct Polynomial {
  std::vector<Rational> coefficients;

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  std::string to_string(const std::string& var = "n") const {
    std::string out;
    for (std::size_t k = coefficients.size(); k-- > 0;) {
      const Rational& c = coefficients[k];
      if (sgn(c) == 0) continue;
      Rational a = abs(c);
      if (out.empty()) {
        if (sgn(c) < 0) out += "-";
      } else {
        out += sgn(c) < 0 ? " - " : " + ";
      }
      bool unit = a == 1 && k > 0;
      if (!unit) out += a.get_str();
      if (k > 0) out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
  }
};

inline Polynomial interpolate(const std::vector<std::pair<Rational, Rational>>& samples) {
  const std::size_t m = samples.size();
  std::vector<Rational> result(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> basis{1};
    Rational denom = 1;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      std::vector<Rational> next(basis.size() + 1);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] += basis[k];
        next[k] -= basis[k] * samples[j].first;
      }
      basis = next;
      denom *= samples[i].first - samples[j].first;
    }
    for (std::size_t k = 0; k < m; ++k) result[k] += basis[k] * samples[i].second / denom;
  }
  while (result.size() > 1 && sgn(result.back()) == 0) result.pop_back();
  return {result};
}

struct CountFit {
  Polynomial polynomial;
  int degree = 0;
  std::vector<std::pair<long, Integer>> samples;      // n = 1..d+1
  std::vector<std::pair<long, Integer>> validations;  // n = d+2, d+3
  bool reciprocity_holds = false;                     // interior(n) = (-1)^d all(-n), n = 1..d+3
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

inline bool has_integral_vertices(const Polytope& p) {
  for (const auto& v : p.vertices())
    for (const auto& x : v)
      if (x.get_den() != 1) return false;
  return true;
}

inline CountFit fit_count_polynomial(const Polytope& p, bool interior) {
  if (p.is_empty()) throw Error("empty polytope");
  if (!has_integral_vertices(p)) throw Error("polytope has non-integral vertices; its counting function is a quasi-polynomial");
  const int d = p.dim();
  CountFit fit;
  fit.degree = d;
  std::vector<std::pair<Rational, Rational>> pts;
  std::vector<Integer> all(d + 4), inner(d + 4);
  for (long n = 1; n <= d + 3; ++n) {
    auto c = denominator_bounded_count(p, n);
    all[n] = c.all;
    inner[n] = c.interior;
  }
  for (long n = 1; n <= d + 1; ++n) {
    Integer v = interior ? inner[n] : all[n];
    fit.samples.push_back({n, v});
    pts.push_back({Rational(n), Rational(v)});
  }
  fit.polynomial = interpolate(pts);
  for (long n = d + 2; n <= d + 3; ++n) {
    Integer v = interior ? inner[n] : all[n];
    fit.validations.push_back({n, v});
    if (fit.polynomial(Rational(n)) != Rational(v))
      throw ValidationError("fitted polynomial fails to reproduce the count at n = " + std::to_string(n));
  }
  std::vector<std::pair<Rational, Rational>> all_pts;
  for (long n = 1; n <= d + 1; ++n) all_pts.push_back({Rational(n), Rational(all[n])});
  Polynomial e = interpolate(all_pts);
  fit.reciprocity_holds = true;
  for (long n = 1; n <= d + 3; ++n) {
    Rational mirrored = e(Rational(-n));
    if (d % 2 != 0) mirrored = -mirrored;
    if (mirrored != Rational(inner[n])) fit.reciprocity_holds = false;
  }
  return fit;
}

}  // namespace stoich::lattice
