#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stoich/rational.hpp"

namespace stoich::formula {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string text, std::size_t position)
      : Error(message + " at position " + std::to_string(position) + " in '" + text + "'"),
        text_(std::move(text)),
        position_(position) {}

  const std::string& text() const { return text_; }
  std::size_t position() const { return position_; }

 private:
  std::string text_;
  std::size_t position_;
};

struct Composition {
  std::map<std::string, long> elements;
  long charge = 0;

  bool is_electron() const { return elements.empty() && charge == -1; }
  bool operator==(const Composition& o) const { return elements == o.elements && charge == o.charge; }
};

struct Species {
  std::string label;
  Composition composition;
};

struct Reaction {
  std::vector<Species> reactants;
  std::vector<Species> products;

  std::size_t size() const { return reactants.size() + products.size(); }
  bool is_reactant(std::size_t i) const { return i < reactants.size(); }
  const Species& species(std::size_t i) const {
    return i < reactants.size() ? reactants[i] : products.at(i - reactants.size());
  }
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(species(i).label);
    return out;
  }
  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (species(i).label == label) return i;
    return std::nullopt;
  }
  bool has_charge() const {
    for (std::size_t i = 0; i < size(); ++i)
      if (species(i).composition.charge != 0) return true;
    return false;
  }
  void validate() const {
    if (reactants.empty()) throw Error("reaction has no reactants");
    if (products.empty()) throw Error("reaction has no products");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < size(); ++i)
      if (!seen.insert(species(i).label).second) throw Error("duplicate species label '" + species(i).label + "'");
  }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Composition parse() {
    if (text_.empty()) fail("empty formula");
    Composition c;
    char first = text_[0];
    if (std::isdigit(static_cast<unsigned char>(first))) fail("leading digits (isotope or coefficient) are not part of a formula");
    if (first == 'e' && (text_.size() == 1 || text_[1] == '^' || text_[1] == '-' || text_[1] == '+')) {
      ++pos_;
      c.charge = parse_charge();
      if (pos_ != text_.size()) fail("unexpected character");
      if (c.charge != -1) fail("electron must carry charge -1");
      return c;
    }
    c.elements = parse_group(0);
    c.charge = parse_charge();
    if (pos_ != text_.size()) {
      char ch = text_[pos_];
      if (ch == ')' || ch == ']') fail("unbalanced brackets");
      if (ch == '.' || ch == '*') fail("hydrate notation is not supported");
      fail("unexpected character");
    }
    return c;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, std::string(text_), pos_); }

  bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  std::map<std::string, long> parse_group(char closer) {
    std::map<std::string, long> out;
    bool any = false;
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      std::map<std::string, long> part;
      if (ch == '(' || ch == '[') {
        std::size_t open = pos_;
        ++pos_;
        char want = ch == '(' ? ')' : ']';
        part = parse_group(want);
        if (!at(want)) {
          pos_ = pos_ < text_.size() ? pos_ : open;
          fail("unbalanced brackets");
        }
        ++pos_;
        if (part.empty()) fail("empty group");
      } else if (std::isupper(static_cast<unsigned char>(ch))) {
        std::string sym(1, ch);
        ++pos_;
        while (pos_ < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_]))) sym += text_[pos_++];
        part[sym] = 1;
      } else if (ch == ')' || ch == ']') {
        if (closer == 0 || ch != closer) fail("unbalanced brackets");
        break;
      } else {
        break;
      }
      long n = parse_count();
      for (auto& [sym, k] : part) out[sym] += k * n;
      any = true;
    }
    if (!any) fail(closer ? "empty group" : "expected an element symbol");
    return out;
  }

  long parse_count() {
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) return 1;
    if (text_[pos_] == '0') fail("zero subscript");
    long n = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      n = n * 10 + (text_[pos_++] - '0');
      if (n > 1000000) fail("subscript too large");
    }
    return n;
  }

  long parse_charge() {
    if (pos_ >= text_.size()) return 0;
    if (text_[pos_] == '^') {
      ++pos_;
      long mag = 1;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        if (text_[pos_] == '0') fail("zero charge magnitude");
        mag = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          mag = mag * 10 + (text_[pos_++] - '0');
      }
      if (at('+')) {
        ++pos_;
        return mag;
      }
      if (at('-')) {
        ++pos_;
        return -mag;
      }
      fail("charge sign expected after '^'");
    }
    if (text_[pos_] == '+' || text_[pos_] == '-') {
      char s = text_[pos_];
      long mag = 0;
      while (at(s)) {
        ++pos_;
        ++mag;
      }
      return s == '+' ? mag : -mag;
    }
    return 0;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Composition parse_formula(std::string_view text) { return detail::Parser(text).parse(); }

inline std::string render(const Composition& c) {
  std::string out;
  if (c.elements.empty()) {
    if (c.charge != -1) throw Error("only the electron may have no elements");
    return "e^-";
  }
  for (const auto& [sym, n] : c.elements) {
    if (n == 0) continue;
    out += sym;
    if (n != 1) out += std::to_string(n);
  }
  if (c.charge != 0) {
    out += '^';
    long m = c.charge < 0 ? -c.charge : c.charge;
    if (m != 1) out += std::to_string(m);
    out += c.charge < 0 ? '-' : '+';
  }
  return out;
}

struct ParsedEquation {
  Reaction reaction;
  std::vector<std::optional<long>> coefficients;  // leading integers as written, reactants then products
};

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

inline void parse_side(std::string_view side, std::size_t offset, const std::string& whole,
                       std::vector<Species>& out, std::vector<std::optional<long>>& coeffs) {
  auto tokens = split_ws(side);
  if (tokens.empty()) throw ParseError("empty side of equation", whole, offset);
  std::vector<std::vector<std::string>> groups(1);
  for (const auto& t : tokens) {
    if (t == "+") {
      if (groups.back().empty()) throw ParseError("dangling '+'", whole, offset);
      groups.emplace_back();
    } else {
      groups.back().push_back(t);
    }
  }
  if (groups.back().empty()) throw ParseError("dangling '+'", whole, offset);
  for (auto& g : groups) {
    std::optional<long> coef;
    std::string text;
    if (g.size() == 2 && all_digits(g[0])) {
      coef = std::stol(g[0]);
      text = g[1];
    } else if (g.size() == 1) {
      text = g[0];
      std::size_t k = 0;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      if (k > 0 && k < text.size()) {
        coef = std::stol(text.substr(0, k));
        text = text.substr(k);
      }
    } else {
      throw ParseError("species must be separated by ' + '", whole, offset);
    }
    if (coef && *coef == 0) throw ParseError("zero coefficient", whole, offset);
    std::size_t at = whole.find(text, offset);
    try {
      out.push_back({text, parse_formula(text)});
    } catch (const ParseError& e) {
      throw ParseError("bad species '" + text + "'", whole, (at == std::string::npos ? offset : at) + e.position());
    }
    coeffs.push_back(coef);
  }
}

}  // namespace detail

inline ParsedEquation parse_equation(std::string_view text) {
  const std::string whole(text);
  static const std::vector<std::string> seps = {"->", "\xE2\x86\x92", "="};
  std::size_t where = std::string::npos, len = 0, count = 0;
  for (const auto& s : seps) {
    for (std::size_t p = whole.find(s); p != std::string::npos; p = whole.find(s, p + s.size())) {
      ++count;
      if (p < where) {
        where = p;
        len = s.size();
      }
    }
  }
  if (count == 0) throw ParseError("missing reaction arrow", whole, 0);
  if (count > 1) throw ParseError("more than one reaction arrow", whole, where);
  ParsedEquation eq;
  std::vector<std::optional<long>> lhs, rhs;
  detail::parse_side(std::string_view(whole).substr(0, where), 0, whole, eq.reaction.reactants, lhs);
  detail::parse_side(std::string_view(whole).substr(where + len), where + len, whole, eq.reaction.products, rhs);
  eq.coefficients = lhs;
  eq.coefficients.insert(eq.coefficients.end(), rhs.begin(), rhs.end());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < eq.reaction.size(); ++i) {
    const auto& label = eq.reaction.species(i).label;
    if (!seen.insert(label).second) throw ParseError("duplicate species '" + label + "'", whole, whole.find(label));
  }
  return eq;
}

inline Reaction parse_reaction(std::string_view text) { return parse_equation(text).reaction; }

// Elements in order of first appearance across the reaction.
inline std::vector<std::string> element_order(const Reaction& r) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < r.size(); ++i) {
    // First appearance follows the written formula, not the map order.
    const std::string& label = r.species(i).label;
    for (std::size_t k = 0; k < label.size(); ++k) {
      if (!std::isupper(static_cast<unsigned char>(label[k]))) continue;
      std::string sym(1, label[k]);
      while (k + 1 < label.size() && std::islower(static_cast<unsigned char>(label[k + 1]))) sym += label[++k];
      if (r.species(i).composition.elements.count(sym) && seen.insert(sym).second) order.push_back(sym);
    }
    for (const auto& [sym, n] : r.species(i).composition.elements)
      if (seen.insert(sym).second) order.push_back(sym);
  }
  return order;
}

inline Vector composition_vector(const Composition& c, const std::vector<std::string>& order, bool with_charge) {
  for (const auto& [sym, n] : c.elements) {
    bool found = false;
    for (const auto& o : order) found = found || o == sym;
    if (!found) throw Error("element '" + sym + "' missing from element order");
  }
  Vector v;
  for (const auto& sym : order) {
    auto it = c.elements.find(sym);
    v.emplace_back(it == c.elements.end() ? 0L : it->second);
  }
  if (with_charge) v.emplace_back(c.charge);
  return v;
}

inline Vector barycentric_point(const Composition& c, const std::vector<std::string>& order) {
  Vector v = composition_vector(c, order, false);
  Rational total = 0;
  for (const auto& x : v) total += x;
  if (sgn(total) == 0) throw Error("barycentric point of a species without elements");
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace stoich::formula
