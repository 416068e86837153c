#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "stoich/corpus.hpp"
#include "stoich/io.hpp"

using namespace stoich;
using io::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_all(std::istream& in) {
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// "-" reads stdin.
std::string read_source(const std::string& path) {
  if (path == "-") return read_all(std::cin);
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  return read_all(f);
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_source(path));
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string equation_text(const std::string& arg, const std::string& file) {
  if (!file.empty()) return read_source(file);
  if (arg == "-") return read_all(std::cin);
  if (arg.empty()) throw UsageError("an equation or --file is required");
  return arg;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Vector rational_list(const std::string& s) {
  Vector v;
  for (const auto& x : split_list(s)) v.push_back(parse_rational(x));
  return v;
}

balance::BalanceOptions options_for(const std::string& order) {
  balance::BalanceOptions o;
  if (!order.empty()) o.element_order = split_list(order);
  return o;
}

std::string show_vector(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

std::string show_ints(const IntVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i].get_str();
  return s;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

// --- balance ---

struct BalanceArgs {
  std::string equation, file, order, at;
  bool json = false, moduli = false;
  long smallest = 12;
};

int run_balance(const BalanceArgs& a) {
  auto r = formula::parse_reaction(equation_text(a.equation, a.file));
  auto o = options_for(a.order);
  auto c = balance::classify(r, o);
  auto g = balance::reaction_geometry(r, o);
  std::vector<balance::Balance> extremes, small;
  if (c.kind != balance::BalanceKind::NoBalance) {
    extremes = balance::extreme_balances(r, o);
    small = balance::smallest_balances(r, a.smallest, o);
  }
  std::optional<balance::BalanceAt> at;
  if (!a.at.empty()) at = balance::balance_at(r, rational_list(a.at), o);

  if (a.json) {
    json j = {{"classification", io::to_json(c)}};
    json ex = json::array(), sm = json::array();
    for (const auto& b : extremes) ex.push_back(io::to_json(b));
    for (const auto& b : small) sm.push_back(io::to_json(b));
    j["extreme_balances"] = ex;
    j["smallest_balances"] = sm;
    if (c.kind != balance::BalanceKind::NoBalance) j["generic_balance"] = io::to_json(balance::generic_balance(r, o));
    j["element_order"] = g.system.element_order;
    j["intersection"] = io::to_json(g.intersection);
    if (a.moduli) j["moduli_polyhedron"] = io::to_json(balance::moduli_polyhedron(r, std::nullopt, o));
    if (at) j["at"] = {{"balance", io::to_json(at->balance)}, {"unique", at->unique}};
    print(j);
    return 0;
  }

  switch (c.kind) {
    case balance::BalanceKind::NoBalance:
      std::cout << "no balancing exists\n";
      break;
    case balance::BalanceKind::UniqueUpToScale:
      std::cout << "unique up to scale\n" << extremes.front().to_string() << "\n";
      break;
    case balance::BalanceKind::Multiple:
      std::cout << "multiple balancings (balance cone dimension " << c.balance_cone_dim << ")\n";
      std::cout << "extreme balances:\n";
      for (const auto& b : extremes) std::cout << "  " << b.to_string() << "\n";
      std::cout << "smallest balances (total <= " << a.smallest << "):\n";
      for (const auto& b : small) std::cout << "  " << b.to_string() << "\n";
      break;
  }
  std::cout << "dim NS = " << c.moduli_dim << ", intersection dim = "
            << (c.intersection_dim ? std::to_string(*c.intersection_dim) : std::string("none")) << "\n";
  if (c.intersection_dim && *c.intersection_dim >= 0) {
    std::cout << "intersection vertices in (";
    for (std::size_t i = 0; i < g.system.element_order.size(); ++i) std::cout << (i ? ", " : "") << g.system.element_order[i];
    std::cout << "):";
    for (const auto& v : g.intersection.vertices()) std::cout << " " << show_vector(v);
    std::cout << "\n";
  }
  if (a.moduli) {
    auto q = balance::moduli_polyhedron(r, std::nullopt, o);
    std::cout << "moduli basis:\n";
    for (const auto& b : q.basis) std::cout << "  " << show_vector(b) << "\n";
    for (std::size_t i = 0; i < q.inequalities.size(); ++i)
      std::cout << "  " << r.species(i).label << ": " << show_vector(q.inequalities[i].coefficients)
                << (q.inequalities[i].at_most_zero ? " <= 0" : " >= 0") << "\n";
  }
  if (at) std::cout << "at " << show_vector(rational_list(a.at)) << ": " << at->balance.to_string()
                    << (at->unique ? "" : " (one of several)") << "\n";
  return 0;
}

// --- redox ---

struct RedoxArgs {
  std::string equation, file, order, medium = "acidic", method = "charge-row";
  bool splits = false, json = false;
};

int run_redox(const RedoxArgs& a) {
  auto r = formula::parse_reaction(equation_text(a.equation, a.file));
  auto medium = a.medium == "basic" ? redox::Medium::Basic : redox::Medium::Acidic;
  json out = json::object();
  std::ostringstream text;

  if (a.splits) {
    json arr = json::array();
    for (const auto& s : redox::enumerate_half_reaction_splits(r)) {
      auto show = [](const formula::Reaction& x) {
        std::string t;
        for (std::size_t i = 0; i < x.reactants.size(); ++i) t += (i ? " + " : "") + x.reactants[i].label;
        t += " -> ";
        for (std::size_t i = 0; i < x.products.size(); ++i) t += (i ? " + " : "") + x.products[i].label;
        return t;
      };
      arr.push_back({show(s.first), show(s.second)});
      text << "  " << show(s.first) << "  |  " << show(s.second) << "\n";
    }
    out["splits"] = arr;
    if (!a.json) std::cout << "half-reaction splits:\n" << text.str();
    text.str("");
  }

  if (a.method == "charge-row") {
    auto o = options_for(a.order);
    auto cs = redox::charge_system(r, o);
    auto c = balance::classify(r, o);
    std::vector<std::string> rejected;
    for (auto j : cs.rejected) rejected.push_back(r.species(j).label);
    out["element_order"] = cs.system.element_order;
    out["rejected_by_element_sum"] = rejected;
    out["slice"] = cs.slice ? json{{"normal", io::to_json(cs.slice->normal)}, {"offset", io::to_json(cs.slice->offset)}}
                            : json(nullptr);
    out["classification"] = io::to_json(c);
    json bal = json::array();
    if (c.kind != balance::BalanceKind::NoBalance)
      for (const auto& b : balance::extreme_balances(r, o)) {
        bal.push_back(io::to_json(b));
        text << b.to_string() << "\n";
      }
    out["balances"] = bal;
    if (!rejected.empty()) {
      text << "element-sum slice rejects:";
      for (const auto& l : rejected) text << " " << l;
      text << "\n";
    }
    if (c.kind == balance::BalanceKind::NoBalance) text << "no balancing exists\n";
    if (cs.slice) text << "slice normal " << show_vector(cs.slice->normal) << "\n";
  } else if (a.method == "spectator") {
    auto sp = redox::spectator_transform(r);
    out["transformed"] = sp.transformed.labels();
    json bal = json::array();
    text << "transformed:";
    for (const auto& l : sp.transformed.labels()) text << " " << l;
    text << "\n";
    auto c = balance::classify(sp.transformed);
    if (c.kind == balance::BalanceKind::NoBalance) {
      text << "no balancing exists\n";
    } else {
      for (const auto& b : balance::extreme_balances(sp.transformed)) {
        auto s = sp.strip(b);
        bal.push_back({{"neutral", io::to_json(b)}, {"stripped", io::to_json(s)}});
        text << b.to_string() << "\n  => " << s.to_string() << "\n";
      }
    }
    out["balances"] = bal;
  } else if (a.method == "half-reaction") {
    json bal = json::array();
    for (const auto& b : redox::half_reaction_reachable_balances(r, medium)) {
      bal.push_back(io::to_json(b));
      text << b.to_string() << "\n";
    }
    if (bal.empty()) text << "no half-reaction balance reached\n";
    out["medium"] = a.medium;
    out["balances"] = bal;
  }
  if (a.json)
    print(out);
  else
    std::cout << text.str();
  return 0;
}

// --- mechanism ---

struct MechanismArgs {
  std::string verb, file, c, observed, elements;
  long t = 6, steps = -1, bound = 3;
  bool known_only = false, projective = false, list = false, assume_complete = false, json = false;
};

std::optional<ratlin::Matrix> elements_for(const MechanismArgs& a, const io::MechanismInput& in) {
  if (!a.elements.empty()) return io::matrix_from_json(read_json(a.elements));
  return in.elements;
}

int run_mechanism(const MechanismArgs& a) {
  json doc = read_json(a.file);
  auto in = io::mechanism_from_json(doc);
  const auto& m = in.mechanism;
  json out = json::object();
  std::ostringstream text;

  if (a.verb == "report") {
    auto rep = mechanism::conservation_report(m, elements_for(a, in));
    out["mass_space"] = io::to_json(rep.mass_space);
    out["observed_space"] = io::to_json(rep.observed_space);
    out["conservative"] = rep.conservative;
    if (rep.positive_law) out["positive_law"] = io::to_json(*rep.positive_law);
    if (rep.element_space) out["element_space"] = io::to_json(*rep.element_space);
    if (rep.homology_dim) out["homology_dim"] = *rep.homology_dim;
    text << "dim NS(N^T) = " << rep.mass_space.dim() << "\n";
    text << (rep.conservative ? "conservative" : "not conservative");
    if (rep.positive_law) text << ", positive law " << show_vector(*rep.positive_law);
    text << "\n";
    if (rep.homology_dim) text << "dim NS(M) - rank N = " << *rep.homology_dim << "\n";
  } else if (a.verb == "consistent") {
    mechanism::ConsistentOptions o;
    o.known_only = a.known_only;
    o.projective = a.projective;
    auto res = mechanism::consistent_reactions(m, a.t, o);
    auto region = mechanism::consistent_region(m, a.t, a.known_only);
    out["t"] = a.t;
    out["count"] = res.count();
    out["region"] = io::to_json(region);
    if (a.list) {
      json pts = json::array();
      for (const auto& p : res.points) pts.push_back(io::to_json(p));
      out["points"] = pts;
    }
    text << res.count() << " consistent reactions with |c|_1 <= " << a.t << "\n";
    text << "region dim " << region.dim() << ", " << region.vertices().size() << " vertices\n";
    if (a.list)
      for (const auto& p : res.points) text << "  " << show_ints(p) << "\n";
  } else if (a.verb == "represent") {
    if (a.c.empty()) throw UsageError("represent needs --c");
    auto c = rational_list(a.c);
    auto reps = mechanism::algebraic_representations(m, c, a.steps >= 0 ? std::optional<long>(a.steps) : std::nullopt);
    json arr = json::array();
    for (const auto& x : reps) {
      arr.push_back(io::to_json(x));
      text << show_ints(x) << "\n";
    }
    out["representations"] = arr;
    if (reps.empty()) text << "no representation\n";
  } else if (a.verb == "inverse") {
    auto el = elements_for(a, in);
    if (!el) throw UsageError("inverse needs an elemental matrix (\"M\" in the mechanism file or --elements)");
    ratlin::Subspace observed;
    if (!a.observed.empty()) {
      json o = read_json(a.observed);
      observed = o.is_array() ? ratlin::Subspace::row_space(io::matrix_from_json(o)) : io::subspace_from_json(o);
    } else if (doc.contains("observed")) {
      observed = ratlin::Subspace::row_space(io::matrix_from_json(doc.at("observed")));
    } else {
      throw UsageError("inverse needs --observed");
    }
    auto rep = mechanism::inverse_mechanism_spaces(m.species.size(), m.known, m.intermediates, *el, observed,
                                                   a.assume_complete);
    const auto& t = rep.table;
    json tab = json::object();
    tab["NS"] = t.ns;
    tab["RS"] = t.rs;
    tab["K"] = t.k;
    tab["pK_NS"] = t.pk_ns;
    tab["pK_RS"] = t.pk_rs;
    tab["pK_NS_cap_pK_RS"] = t.intersection;
    tab["O"] = t.o;
    tab["O_mod_pK_RS"] = t.o_mod_pk_rs;
    tab["pU_RS"] = t.pu_rs;
    out["table"] = tab;
    out["Z"] = io::to_json(rep.z);
    out["proj_Z_O"] = io::to_json(rep.proj_z_o);
    out["ambiguity"] = io::to_json(rep.ambiguity);
    if (rep.h) out["H"] = io::to_json(*rep.h);
    out["H_of_N"] = io::to_json(mechanism::mechanism_h_space(m.N, *el));
    text << "NS " << t.ns << ", RS " << t.rs << ", K " << t.k << ", pK NS " << t.pk_ns << ", pK RS " << t.pk_rs
         << ", cap " << t.intersection << ", O " << t.o << ", O/pK RS " << t.o_mod_pk_rs << ", pU RS " << t.pu_rs << "\n";
    text << "proj_Z O:";
    for (const auto& v : rep.proj_z_o.basis_vectors()) text << " " << show_vector(v);
    text << (rep.proj_z_o.dim() == 0 ? " {0}\n" : "\n");
  } else if (a.verb == "precedence") {
    auto p = mechanism::precedence_analysis(m);
    json it = json::array(), lv = json::array();
    for (std::size_t i = 0; i < p.iterates.size(); ++i) {
      std::vector<std::string> names;
      for (auto v : p.iterates[i]) names.push_back(p.vertex_names[v]);
      it.push_back(names);
      text << "phi^" << (i + 1) << ": {" << corpus::detail::join(names) << "}\n";
    }
    for (std::size_t j = 0; j < p.level.size(); ++j) {
      lv.push_back(p.level[j] ? json(*p.level[j]) : json(nullptr));
      text << "reaction " << (j + 1) << ": " << (p.level[j] ? "level " + std::to_string(*p.level[j]) : "never") << "\n";
    }
    out["iterates"] = it;
    out["levels"] = lv;
  } else if (a.verb == "candidates") {
    auto el = elements_for(a, in);
    if (!el) throw UsageError("candidates needs an elemental matrix");
    auto cand = mechanism::candidate_elementary_reactions(ratlin::Subspace::null_space(*el), a.bound);
    json arr = json::array();
    for (const auto& v : cand.lines) {
      arr.push_back(io::to_json(v));
      if (a.list) text << "  " << show_ints(v) << "\n";
    }
    out["vectors"] = cand.vectors.size();
    out["lines"] = arr;
    text << cand.vectors.size() << " vectors, " << cand.lines.size() << " lines\n";
  }
  if (a.json)
    print(out);
  else
    std::cout << text.str();
  return 0;
}

// --- count ---

struct CountArgs {
  std::string file;
  long n = 1;
  bool interior = false, fit = false, json = false;
};

int run_count(const CountArgs& a) {
  auto p = io::polytope_from_json(read_json(a.file));
  json out = {{"dim", p.dim()}};
  std::ostringstream text;
  if (a.fit) {
    auto f = lattice::fit_count_polynomial(p, a.interior);
    out["polynomial"] = f.polynomial.to_string();
    json cs = json::array();
    for (const auto& c : f.polynomial.coefficients) cs.push_back(io::to_json(c));
    out["coefficients"] = cs;
    out["reciprocity"] = f.reciprocity_holds;
    text << (a.interior ? "interior" : "all") << "(n) = " << f.polynomial.to_string() << "\n";
    for (const auto& [n, v] : f.samples) text << "  n=" << n << ": " << v.get_str() << "\n";
    for (const auto& [n, v] : f.validations) text << "  n=" << n << ": " << v.get_str() << " (validated)\n";
    text << "reciprocity " << (f.reciprocity_holds ? "holds" : "fails") << "\n";
  } else {
    auto c = lattice::denominator_bounded_count(p, a.n);
    out["n"] = a.n;
    out["all"] = c.all.get_str();
    out["interior"] = c.interior.get_str();
    text << "n=" << a.n << ": " << (a.interior ? c.interior : c.all).get_str() << (a.interior ? " interior" : "")
         << " points\n";
  }
  if (a.json)
    print(out);
  else
    std::cout << text.str();
  return 0;
}

// --- polytope ---

int run_polytope(const std::string& equation, const std::string& file, const std::string& order) {
  auto r = formula::parse_reaction(equation_text(equation, file));
  auto g = balance::reaction_geometry(r, options_for(order));
  json sliced = json::array();
  for (std::size_t i = 0; i < g.sliced.size(); ++i) sliced.push_back({{"species", r.species(i).label}, {"point", io::to_json(g.sliced[i])}});
  print({{"element_order", g.system.element_order},
         {"slice", g.slice ? json{{"normal", io::to_json(g.slice->normal)}, {"offset", io::to_json(g.slice->offset)}}
                           : json(nullptr)},
         {"species", sliced},
         {"reactants", io::to_json(g.reactant_polytope)},
         {"products", io::to_json(g.product_polytope)},
         {"intersection", io::to_json(g.intersection)}});
  return 0;
}

// --- corpus ---

int run_corpus(bool list, const std::string& dump) {
  if (!dump.empty()) {
    if (dump == "azomethane") {
      print(io::to_json(corpus::data::azomethane(), corpus::data::azomethane_elements()));
    } else if (dump == "quadrilateral") {
      print(io::to_json(corpus::data::scaled_quadrilateral()));
    } else {
      throw UsageError("unknown dataset " + dump);
    }
    return 0;
  }
  if (list) {
    std::cout << "datasets: azomethane, quadrilateral\n";
    for (const auto& c : corpus::checks()) std::cout << "[" << (c.id < 10 ? " " : "") << c.id << "] " << c.title << "\n";
    return 0;
  }
  int failed = 0;
  for (const auto& c : corpus::checks()) {
    auto r = corpus::run_check(c);
    std::cout << corpus::format(r) << "\n";
    if (!r.passed) ++failed;
  }
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic stoichiometry workbench"};
  app.require_subcommand(1, 1);

  BalanceArgs ba;
  auto* bal = app.add_subcommand("balance", "Classify and balance a chemical equation");
  bal->add_option("equation", ba.equation, "Equation text, e.g. \"H2 + O2 -> H2O\" (\"-\" reads stdin)");
  bal->add_option("--file", ba.file, "Read the equation from a file");
  bal->add_option("--order", ba.order, "Element order, comma separated");
  bal->add_option("--smallest", ba.smallest, "Coefficient-sum bound for listing smallest balances")->check(CLI::PositiveNumber);
  bal->add_option("--at", ba.at, "Balance determined by a point of the intersection polytope, comma separated");
  bal->add_flag("--moduli", ba.moduli, "Include the moduli polyhedron");
  bal->add_flag("--json", ba.json, "JSON output");
  bal->callback([&] {
    if (!ba.file.empty() && !ba.equation.empty()) throw CLI::ValidationError("give an equation or --file, not both");
  });

  RedoxArgs ra;
  auto* red = app.add_subcommand("redox", "Balance a charged or redox equation");
  red->add_option("equation", ra.equation, "Equation text (\"-\" reads stdin)");
  red->add_option("--file", ra.file, "Read the equation from a file");
  red->add_option("--order", ra.order, "Element order, comma separated");
  red->add_option("--medium", ra.medium, "acidic or basic")->check(CLI::IsMember({"acidic", "basic"}));
  red->add_option("--method", ra.method, "charge-row, spectator or half-reaction")
      ->check(CLI::IsMember({"charge-row", "spectator", "half-reaction"}));
  red->add_flag("--splits", ra.splits, "List half-reaction decompositions");
  red->add_flag("--json", ra.json, "JSON output");

  MechanismArgs ma;
  auto* mech = app.add_subcommand("mechanism", "Analyze a reaction mechanism given as JSON");
  mech->add_option("verb", ma.verb, "report | consistent | represent | inverse | precedence | candidates")
      ->required()
      ->check(CLI::IsMember({"report", "consistent", "represent", "inverse", "precedence", "candidates"}));
  mech->add_option("file", ma.file, "Mechanism JSON (\"-\" reads stdin)")->required();
  mech->add_option("--t", ma.t, "Bound on |c|_1 for consistent reactions")->check(CLI::NonNegativeNumber);
  mech->add_flag("--known-only", ma.known_only, "Only reactions vanishing on intermediates");
  mech->add_flag("--projective", ma.projective, "Count reactions up to positive scale");
  mech->add_flag("--list", ma.list, "List the points or candidates");
  mech->add_option("--c", ma.c, "Overall reaction, comma separated, on all species or on the known ones");
  mech->add_option("--steps", ma.steps, "Bound on the number of elementary steps")->check(CLI::NonNegativeNumber);
  mech->add_option("--observed", ma.observed, "Observed dependencies as JSON rows or a subspace");
  mech->add_option("--elements", ma.elements, "Elemental matrix as JSON rows, overriding \"M\"");
  mech->add_flag("--assume-complete", ma.assume_complete, "Lift the projected observations into NS(M)");
  mech->add_option("--bound", ma.bound, "Box bound for candidate elementary reactions")->check(CLI::PositiveNumber);
  mech->add_flag("--json", ma.json, "JSON output");

  CountArgs ca;
  auto* cnt = app.add_subcommand("count", "Count lattice points of a polytope given as JSON");
  cnt->add_option("file", ca.file, "Polytope JSON (\"-\" reads stdin)")->required();
  cnt->add_option("--n", ca.n, "Denominator bound")->check(CLI::NonNegativeNumber);
  cnt->add_flag("--interior", ca.interior, "Count relative-interior points");
  cnt->add_flag("--fit", ca.fit, "Fit the counting polynomial (integral vertices only)");
  cnt->add_flag("--json", ca.json, "JSON output");

  std::string pe, pf, po;
  auto* poly = app.add_subcommand("polytope", "Export reactant, product and intersection polytopes as JSON");
  poly->add_option("equation", pe, "Equation text (\"-\" reads stdin)");
  poly->add_option("--file", pf, "Read the equation from a file");
  poly->add_option("--order", po, "Element order, comma separated");

  bool clist = false;
  std::string cdump;
  auto* corp = app.add_subcommand("corpus", "Run the embedded reference checks");
  corp->add_flag("--list", clist, "List datasets and checks without running them");
  corp->add_option("--dump", cdump, "Print an embedded dataset as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*bal) return run_balance(ba);
    if (*red) return run_redox(ra);
    if (*mech) return run_mechanism(ma);
    if (*cnt) return run_count(ca);
    if (*poly) return run_polytope(pe, pf, po);
    if (*corp) return run_corpus(clist, cdump);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const formula::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
