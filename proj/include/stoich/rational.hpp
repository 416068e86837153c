#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stoich {

using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;
using IntVector = std::vector<Integer>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

inline Rational rational(long num, long den = 1) {
  if (den == 0) throw Error("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error("empty rational");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool slash = false;
  bool digit_before = false, digit_after = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (slash) throw Error("malformed rational '" + s + "'");
      slash = true;
    } else if (c >= '0' && c <= '9') {
      (slash ? digit_after : digit_before) = true;
    } else {
      throw Error("malformed rational '" + s + "'");
    }
  }
  if (!digit_before || (slash && !digit_after)) throw Error("malformed rational '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw Error("malformed rational '" + s + "'");
  if (r.get_den() == 0) throw Error("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

inline Rational dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Positive multiple of v with coprime integer entries. Zero stays zero.
inline IntVector primitive_integer(const Vector& v) {
  Integer l = 1;
  for (const auto& x : v) l = lcm(l, x.get_den());
  IntVector out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational scaled = v[i] * l;
    out[i] = scaled.get_num();
    g = gcd(g, out[i]);
  }
  if (g > 1)
    for (auto& z : out) z /= g;
  return out;
}

inline Vector to_vector(const IntVector& v) {
  Vector out;
  out.reserve(v.size());
  for (const auto& z : v) out.emplace_back(z);
  return out;
}

inline Vector primitive(const Vector& v) { return to_vector(primitive_integer(v)); }

inline Vector to_vector(const std::vector<long>& v) {
  Vector out;
  out.reserve(v.size());
  for (long z : v) out.emplace_back(z);
  return out;
}

}  // namespace stoich
