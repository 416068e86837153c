#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "stoich/balance.hpp"
#include "stoich/formula.hpp"
#include "stoich/geometry.hpp"
#include "stoich/mechanism.hpp"
#include "stoich/ratlin.hpp"

namespace stoich::io {

using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) { return r.get_str(); }

// Accepts "p/q" strings and JSON integers.
inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw Error("expected a rational as a \"p/q\" string or an integer");
}

inline json to_json(const Vector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline json to_json(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

inline Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error("expected an array of rationals");
  Vector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

inline json to_json(const ratlin::Matrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline ratlin::Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error("expected an array of rows");
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  if (rows.empty()) return ratlin::Matrix(0, 0);
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw DimensionError("ragged matrix");
  return ratlin::Matrix::from_rows(rows, rows.front().size());
}

inline json to_json(const ratlin::Subspace& s) {
  return {{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()}, {"basis", to_json(s.basis())}};
}

inline ratlin::Subspace subspace_from_json(const json& j) {
  const std::size_t ambient = j.at("ambient_dim").get<std::size_t>();
  ratlin::Matrix b = matrix_from_json(j.at("basis"));
  if (b.rows() > 0 && b.cols() != ambient) throw DimensionError("basis vectors have the wrong length");
  return ratlin::Subspace::span(ambient, b.row_list());
}

inline json to_json(const formula::Composition& c) {
  json e = json::object();
  for (const auto& [el, n] : c.elements) e[el] = n;
  return {{"elements", e}, {"charge", c.charge}};
}

inline formula::Composition composition_from_json(const json& j) {
  formula::Composition c;
  for (const auto& [el, n] : j.at("elements").items()) {
    long k = n.get<long>();
    if (k <= 0) throw Error("element counts must be positive");
    c.elements[el] = k;
  }
  c.charge = j.value("charge", 0L);
  return c;
}

inline json to_json(const geometry::Halfspace& h) { return {{"normal", to_json(h.normal)}, {"offset", to_json(h.offset)}}; }

inline geometry::Halfspace halfspace_from_json(const json& j) {
  return {vector_from_json(j.at("normal")), rational_from_json(j.at("offset"))};
}

inline json to_json(const geometry::Polytope& p) {
  json v = json::array(), h = json::array(), e = json::array();
  for (const auto& x : p.vertices()) v.push_back(to_json(x));
  for (const auto& x : p.halfspaces()) h.push_back(to_json(x));
  for (const auto& x : p.equalities()) e.push_back(to_json(x));
  return {{"ambient_dim", p.ambient_dim()}, {"dim", p.dim()}, {"vertices", v}, {"halfspaces", h}, {"equalities", e}};
}

// Vertices win when present; otherwise the H-representation is used.
inline geometry::Polytope polytope_from_json(const json& j) {
  if (j.contains("vertices") && !j.at("vertices").empty()) {
    std::vector<Vector> pts;
    for (const auto& x : j.at("vertices")) pts.push_back(vector_from_json(x));
    std::size_t ambient = j.value("ambient_dim", pts.front().size());
    return geometry::Polytope::from_points(ambient, pts);
  }
  std::vector<geometry::Halfspace> ineq, eq;
  if (j.contains("halfspaces"))
    for (const auto& x : j.at("halfspaces")) ineq.push_back(halfspace_from_json(x));
  if (j.contains("equalities"))
    for (const auto& x : j.at("equalities")) eq.push_back(halfspace_from_json(x));
  std::size_t ambient = 0;
  if (j.contains("ambient_dim")) {
    ambient = j.at("ambient_dim").get<std::size_t>();
  } else if (!ineq.empty()) {
    ambient = ineq.front().normal.size();
  } else if (!eq.empty()) {
    ambient = eq.front().normal.size();
  } else {
    throw Error("polytope JSON needs vertices or constraints");
  }
  return geometry::Polytope::from_constraints(ambient, ineq, eq);
}

struct MechanismInput {
  mechanism::Mechanism mechanism;
  std::optional<ratlin::Matrix> elements;  // optional "M"
};

inline json to_json(const mechanism::Mechanism& m, const std::optional<ratlin::Matrix>& elements = std::nullopt) {
  json j = {{"species", m.species}, {"known", m.known}, {"intermediates", m.intermediates}, {"N", to_json(m.N)}};
  if (elements) j["M"] = to_json(*elements);
  return j;
}

inline MechanismInput mechanism_from_json(const json& j) {
  MechanismInput in;
  auto& m = in.mechanism;
  m.species = j.at("species").get<std::vector<std::string>>();
  m.known = j.at("known").get<std::vector<std::size_t>>();
  m.intermediates = j.value("intermediates", std::vector<std::size_t>{});
  m.N = matrix_from_json(j.at("N"));
  if (j.contains("M")) in.elements = matrix_from_json(j.at("M"));
  m.validate();
  return in;
}

inline json to_json(const balance::Balance& b) {
  json r = json::array(), p = json::array();
  const auto& rx = b.reaction();
  for (std::size_t i = 0; i < rx.size(); ++i) {
    json t = {{"species", rx.species(i).label}, {"coefficient", Integer(abs(b.coefficients()[i])).get_str()}};
    (rx.is_reactant(i) ? r : p).push_back(t);
  }
  return {{"equation", b.to_string()}, {"reactants", r}, {"products", p}, {"signed", to_json(b.coefficients())}};
}

inline json to_json(const balance::BalanceClassification& c) {
  json j = {{"kind", balance::to_string(c.kind)},
            {"balance_cone_dim", c.balance_cone_dim},
            {"moduli_dim", c.moduli_dim},
            {"span_intersection_dim", c.span_intersection_dim},
            {"kernel_dims", {c.kernel_dims.first, c.kernel_dims.second}},
            {"fiber_dims", {c.fiber_dims.first, c.fiber_dims.second}},
            {"geometric_kind", balance::to_string(c.geometric_kind)},
            {"geometric_cone_dim", c.geometric_cone_dim},
            {"dimension_identity", c.dimension_identity_holds()},
            {"routes_agree", c.routes_agree()}};
  j["intersection_dim"] = c.intersection_dim ? json(*c.intersection_dim) : json(nullptr);
  return j;
}

inline json to_json(const balance::ModuliPolyhedron& q) {
  json basis = json::array(), ineq = json::array(), rays = json::array();
  for (const auto& b : q.basis) basis.push_back(to_json(b));
  for (const auto& a : q.inequalities)
    ineq.push_back({{"coefficients", to_json(a.coefficients)}, {"sense", a.at_most_zero ? "<= 0" : ">= 0"}, {"facet", a.facet}});
  for (const auto& r : q.rays) rays.push_back(to_json(r));
  return {{"dim", q.dim}, {"basis", basis}, {"inequalities", ineq}, {"rays", rays}};
}

}  // namespace stoich::io
