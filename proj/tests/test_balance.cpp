#include <gtest/gtest.h>

#include <random>

#include "stoich/balance.hpp"
#include "stoich/corpus.hpp"
#include "stoich/lp.hpp"

using namespace stoich;
using namespace stoich::balance;
using formula::parse_reaction;

namespace {

Balance from_text(const std::string& eq) { return corpus::detail::expected(eq); }

// Some nonzero sign-respecting balance exists: a_i >= 0 (magnitudes), M s a = 0, sum a = 1.
bool lp_balanceable(const formula::Reaction& r) {
  auto s = species_system(r);
  ratlin::Matrix a(s.matrix.rows() + 1, r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    for (std::size_t i = 0; i < s.matrix.rows(); ++i) a(i, j) = r.is_reactant(j) ? Rational(-s.matrix(i, j)) : s.matrix(i, j);
    a(s.matrix.rows(), j) = 1;
  }
  Vector b(s.matrix.rows() + 1);
  b.back() = 1;
  return lp::nonnegative_solution(a, b).has_value();
}

}  // namespace

TEST(Balance, CanonicalForm) {
  auto r = parse_reaction("H2 + O2 -> H2O");
  auto b = Balance::from_signed(r, {rational(-1), rational(-1, 2), rational(1)});
  EXPECT_EQ(b.to_string(), "2 H2 + O2 -> 2 H2O");
  auto rev = Balance::from_signed(r, {Rational(2), Rational(1), Rational(-2)});
  EXPECT_TRUE(same_balance(b, rev));
  EXPECT_THROW(Balance::from_signed(r, {Rational(-1), Rational(1), Rational(1)}), Error);
  EXPECT_THROW(Balance::from_signed(r, {0, 0, 0}), NoBalanceError);
}

TEST(Balance, UniqueBalances) {
  EXPECT_EQ(unique_balance(parse_reaction("H2 + O2 -> H2O")).to_string(), "2 H2 + O2 -> 2 H2O");
  EXPECT_EQ(unique_balance(parse_reaction("C3H8 + O2 -> CO2 + H2O")).to_string(), "C3H8 + 5 O2 -> 3 CO2 + 4 H2O");
  EXPECT_EQ(classify(parse_reaction("H2 + O2 -> H2O")).kind, BalanceKind::UniqueUpToScale);
}

TEST(Balance, NoBalance) {
  auto c = classify(parse_reaction("XY + YZ -> XYZ2"));
  EXPECT_EQ(c.kind, BalanceKind::NoBalance);
  EXPECT_EQ(c.moduli_dim, 0u);
  EXPECT_THROW(unique_balance(parse_reaction("XY + YZ -> XYZ2")), NoBalanceError);
  // A nullspace exists but every balance has the wrong signs.
  EXPECT_EQ(classify(parse_reaction("H2O -> H2 + O2 + H2O2")).kind, BalanceKind::Multiple);
  EXPECT_EQ(classify(parse_reaction("H2 + H2O2 -> O2")).kind, BalanceKind::NoBalance);
}

TEST(Balance, AllotropeFamily) {
  auto r = parse_reaction("NO + O3 -> NO2 + O2");
  auto c = classify(r);
  EXPECT_EQ(c.kind, BalanceKind::Multiple);
  EXPECT_EQ(c.intersection_dim, 1);
  auto ext = extreme_balances(r);
  ASSERT_EQ(ext.size(), 2u);
  std::set<std::string> got{ext[0].to_string(), ext[1].to_string()};
  EXPECT_TRUE(got.count("3 NO + O3 -> 3 NO2"));
  EXPECT_TRUE(got.count("2 O3 -> 3 O2"));
  auto small = smallest_balances(r, 8);
  ASSERT_EQ(small.size(), 1u);
  EXPECT_EQ(small[0].to_string(), "NO + O3 -> NO2 + O2");
}

TEST(Balance, ModuliInequalitiesInGivenBasis) {
  auto r = parse_reaction("X + Y + XYZ -> XZ + YZ + X5Y5Z2");
  std::vector<Vector> basis{to_vector(std::vector<long>{0, 1, -1, 1, 0, 0}), to_vector(std::vector<long>{1, 0, -1, 0, 1, 0}),
                            to_vector(std::vector<long>{-3, -3, -2, 0, 0, 1})};
  auto q = moduli_polyhedron(r, basis);
  ASSERT_EQ(q.inequalities.size(), 6u);
  std::vector<std::vector<long>> want{{0, 1, -3}, {1, 0, -3}, {-1, -1, -2}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(q.inequalities[i].coefficients, to_vector(want[i])) << i;
    EXPECT_EQ(q.inequalities[i].at_most_zero, i < 3) << i;
  }
  EXPECT_EQ(q.dim, 3u);
}

TEST(Balance, QuadrilateralPoints) {
  auto r = parse_reaction("X + Y + XYZ -> XZ + YZ + X5Y5Z2");
  auto g = reaction_geometry(r);
  std::vector<Vector> want;
  for (auto v : std::vector<std::vector<long>>{{10, 16, 10}, {12, 12, 12}, {15, 15, 6}, {16, 10, 10}}) {
    Vector p;
    for (long x : v) p.push_back(rational(x, 36));
    want.push_back(p);
  }
  EXPECT_EQ(g.intersection.vertices(), want);
  auto at = balance_at(r, {rational(3, 8), rational(3, 8), rational(1, 4)});
  EXPECT_TRUE(at.unique);
  EXPECT_EQ(at.balance.to_string(), "2 X + 2 Y + 4 XYZ -> XZ + YZ + X5Y5Z2");
  EXPECT_THROW(balance_at(r, {Rational(1), 0, 0}), Error);
}

TEST(Balance, RatioRestriction) {
  auto r = parse_reaction("H2SO4 + KMnO4 + H2O2 -> K2SO4 + MnSO4 + O2 + H2O");
  auto rr = apply_ratio_restriction(r, Side::Reactants, {"KMnO4", "H2O2"}, {Rational(2), Rational(5)});
  EXPECT_TRUE(rr.agree);
  EXPECT_EQ(rr.via_vertex.kind, BalanceKind::UniqueUpToScale);
  EXPECT_EQ(rr.replaced.reactants.size(), 2u);
  EXPECT_EQ(rr.replaced.reactants[1].label, "2KMnO4:5H2O2");
  EXPECT_EQ(unique_balance(rr.replaced).to_string(),
            "3 H2SO4 + 2KMnO4:5H2O2 -> K2SO4 + 2 MnSO4 + 5 O2 + 8 H2O");
  EXPECT_THROW(apply_ratio_restriction(r, Side::Products, {"KMnO4", "H2O2"}, {Rational(2), Rational(5)}), Error);
  EXPECT_THROW(apply_ratio_restriction(r, Side::Reactants, {"KMnO4"}, {Rational(1)}), Error);
}

TEST(Balance, ChlorateMixture) {
  auto b = from_text("3 HClO3 -> HClO4 + Cl2 + 2 O2 + H2O");
  ASSERT_TRUE(conserves(b));
  auto parts = mixture_decomposition(b);
  Vector sum(b.reaction().size());
  for (const auto& p : parts)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p.weight * p.component.vector()[i];
  EXPECT_EQ(sum, b.vector());
  // The textbook decomposition is one valid answer.
  auto c1 = from_text("7 HClO3 -> 5 HClO4 + Cl2 + H2O");
  auto c2 = from_text("4 HClO3 -> 2 Cl2 + 5 O2 + 2 H2O");
  Vector alt(b.reaction().size());
  auto pos = [&](const Balance& c, const std::string& l) { return c.key().count(l) ? Rational(c.key().at(l)) : Rational(0); };
  for (std::size_t i = 0; i < alt.size(); ++i) {
    const auto& l = b.reaction().species(i).label;
    alt[i] = rational(1, 5) * pos(c1, l) + rational(2, 5) * pos(c2, l);
  }
  EXPECT_EQ(alt, b.vector());
}

TEST(Balance, SliceFallback) {
  // Electron column has no elements; element-sum slicing fails and the LP slice is used.
  auto r = parse_reaction("MnO4^- + H^+ + e^- -> Mn^2+ + H2O");
  auto c = classify(r);
  EXPECT_EQ(c.kind, BalanceKind::UniqueUpToScale);
  EXPECT_TRUE(c.routes_agree());
}

TEST(Property, ClassificationAgreesWithLP) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    auto r = corpus::random_reaction(rng);
    auto c = classify(r);
    auto s = species_system(r);
    EXPECT_EQ(c.moduli_dim, r.size() - ratlin::rank(s.matrix));
    EXPECT_TRUE(c.dimension_identity_holds());
    EXPECT_TRUE(c.routes_agree());
    EXPECT_EQ(c.kind != BalanceKind::NoBalance, lp_balanceable(r));
    for (const auto& b : extreme_balances(r)) EXPECT_TRUE(conserves(b));
  }
}

TEST(Property, MixturesRecombine) {
  std::mt19937_64 rng(77);
  int done = 0;
  while (done < 100) {
    auto r = corpus::random_reaction(rng);
    if (classify(r).kind == BalanceKind::NoBalance) continue;
    ++done;
    auto b = generic_balance(r);
    Vector sum(r.size());
    for (const auto& p : mixture_decomposition(b)) {
      EXPECT_GT(p.weight, 0);
      for (std::size_t i = 0; i < r.size(); ++i) sum[i] += p.weight * p.component.vector()[i];
    }
    EXPECT_EQ(sum, b.vector());
  }
}
