#include <gtest/gtest.h>

#include <random>

#include "stoich/corpus.hpp"
#include "stoich/redox.hpp"

using namespace stoich;
using namespace stoich::redox;
using formula::parse_reaction;

namespace {

balance::Balance from_text(const std::string& eq) { return corpus::detail::expected(eq); }

// Element and charge totals agree on both sides.
bool conserves_all(const balance::Balance& b) {
  std::map<std::string, Integer> net;
  Integer charge = 0;
  const auto& r = b.reaction();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& c = r.species(i).composition;
    for (const auto& [e, n] : c.elements) net[e] += b.coefficients()[i] * n;
    charge += b.coefficients()[i] * c.charge;
  }
  for (const auto& [e, n] : net)
    if (n != 0) return false;
  return charge == 0;
}

formula::Reaction random_charged(std::mt19937_64& rng) {
  static const char* heavy[] = {"A", "B"};
  std::uniform_int_distribution<int> cnt(0, 3), chg(-2, 2), nsp(2, 4), coin(0, 1);
  int n = nsp(rng);
  std::vector<formula::Species> sp;
  std::set<std::string> seen;
  while (static_cast<int>(sp.size()) < n) {
    formula::Composition c;
    for (auto e : heavy)
      if (int x = cnt(rng)) c.elements[e] = x;
    if (c.elements.empty()) continue;
    if (coin(rng))
      if (int o = cnt(rng)) c.elements["O"] = o;
    c.charge = chg(rng);
    auto l = formula::render(c);
    if (!seen.insert(l).second) continue;
    sp.push_back({l, c});
  }
  int r = std::uniform_int_distribution<int>(1, n - 1)(rng);
  formula::Reaction rx;
  rx.reactants.assign(sp.begin(), sp.begin() + r);
  rx.products.assign(sp.begin() + r, sp.end());
  rx.reactants.push_back({"H^+", formula::parse_formula("H^+")});
  rx.products.push_back({"H2O", formula::parse_formula("H2O")});
  return rx;
}

}  // namespace

TEST(ChargeSystem, RejectedCandidateAndLPSlice) {
  balance::BalanceOptions o;
  o.element_order = std::vector<std::string>{"H", "Mn", "O"};
  auto r = parse_reaction("MnO4^- + H^+ + e^- -> Mn^2+ + H2O");
  auto cs = charge_system(r, o);
  std::vector<std::string> rejected;
  for (auto j : cs.rejected) rejected.push_back(r.species(j).label);
  EXPECT_EQ(rejected, (std::vector<std::string>{"H^+", "Mn^2+"}));
  ASSERT_TRUE(cs.slice);
  for (std::size_t j = 0; j < r.size(); ++j) EXPECT_GT(dot(cs.slice->normal, cs.system.matrix.col(j)), 0);
  EXPECT_TRUE(same_balance(balance::unique_balance(r), from_text("MnO4^- + 8 H^+ + 5 e^- -> Mn^2+ + 4 H2O")));
}

TEST(ChargeSystem, NeutralUsesElementSum) {
  auto cs = charge_system(parse_reaction("H2 + O2 -> H2O"));
  EXPECT_TRUE(cs.rejected.empty());
  EXPECT_TRUE(cs.slice);
}

TEST(Spectator, TransformStripAndLift) {
  auto r = parse_reaction("MnO4^- + Fe^2+ + H^+ -> Mn^2+ + Fe^3+ + H2O");
  auto sp = spectator_transform(r);
  EXPECT_EQ(sp.transformed.labels(),
            (std::vector<std::string>{"MnO4Q", "FeX2", "HX", "MnX2", "FeX3", "H2O", "QX"}));
  EXPECT_FALSE(sp.transformed.has_charge());
  auto ub = balance::unique_balance(sp.transformed);
  auto stripped = sp.strip(ub);
  EXPECT_TRUE(same_balance(stripped, balance::unique_balance(r)));
  EXPECT_TRUE(same_balance(stripped, from_text("MnO4^- + 5 Fe^2+ + 8 H^+ -> Mn^2+ + 5 Fe^3+ + 4 H2O")));
  auto lifted = sp.lift(stripped);
  ASSERT_TRUE(lifted);
  EXPECT_TRUE(same_balance(*lifted, ub));
}

TEST(Spectator, NeutralUnchangedAndChlorideBinding) {
  auto n = parse_reaction("H2 + O2 -> H2O");
  EXPECT_EQ(spectator_transform(n).transformed.labels(), n.labels());
  auto r = parse_reaction("Ca^2+ + Cl^- -> CaCl2");
  auto sp = spectator_transform(r);
  auto b = sp.strip(balance::unique_balance(sp.transformed));
  EXPECT_TRUE(conserves_all(b));
  EXPECT_EQ(b.to_string(), "Ca^2+ + 2 Cl^- -> CaCl2");
}

TEST(HalfReaction, AcidicPermanganateIron) {
  auto ox = balance_half_reaction({parse_reaction("Fe^2+ -> Fe^3+"), Medium::Acidic});
  auto red = balance_half_reaction({parse_reaction("MnO4^- -> Mn^2+"), Medium::Acidic});
  EXPECT_EQ(ox.electrons, 1);
  EXPECT_EQ(red.electrons, -5);
  EXPECT_TRUE(same_balance(red.balance, from_text("MnO4^- + 8 H^+ + 5 e^- -> Mn^2+ + 4 H2O")));
  auto all = combine_half_reactions(ox.balance, red.balance);
  EXPECT_EQ(electron_coefficient(all), 0);
  EXPECT_TRUE(same_balance(all, from_text("MnO4^- + 5 Fe^2+ + 8 H^+ -> Mn^2+ + 5 Fe^3+ + 4 H2O")));
}

TEST(HalfReaction, CombinationErrors) {
  auto ox = balance_half_reaction({parse_reaction("Fe^2+ -> Fe^3+"), Medium::Acidic}).balance;
  auto same = balance_half_reaction({parse_reaction("Cu -> Cu^2+"), Medium::Acidic}).balance;
  EXPECT_THROW(combine_half_reactions(ox, same), Error);
  auto rev = balance_half_reaction({parse_reaction("Fe^3+ -> Fe^2+"), Medium::Acidic}).balance;
  EXPECT_THROW(combine_half_reactions(ox, rev), Error);
  auto neutral = balance_half_reaction({parse_reaction("H2O2 -> O2"), Medium::Acidic});
  EXPECT_NE(neutral.electrons, 0);
  EXPECT_THROW(balance_half_reaction({parse_reaction("Fe -> Cu"), Medium::Acidic}), balance::NoBalanceError);
}

TEST(HalfReaction, MultiplierArithmetic) {
  auto ox = from_text("2 Cr^2+ -> 2 Cr^3+ + 2 e^-");
  auto red = balance_half_reaction({parse_reaction("Fe^3+ -> Fe"), Medium::Acidic}).balance;
  auto all = combine_half_reactions(ox, red);
  EXPECT_TRUE(same_balance(all, from_text("3 Cr^2+ + Fe^3+ -> 3 Cr^3+ + Fe")));
}

TEST(HalfReaction, GoldCandidatesAndReachableSet) {
  auto r = parse_reaction("Au + CN^- + O2 + H2O -> [Au(CN)2]^- + H2O2 + OH^-");
  auto cands = half_reaction_candidates(r);
  std::set<std::vector<std::string>> got;
  for (const auto& c : cands) got.insert(c.labels());
  std::set<std::vector<std::string>> want{{"Au", "CN^-", "[Au(CN)2]^-"},
                                          {"Au", "CN^-", "O2", "[Au(CN)2]^-"},
                                          {"Au", "CN^-", "[Au(CN)2]^-", "H2O2"},
                                          {"O2", "H2O2"}};
  EXPECT_EQ(got, want);
  auto reach = half_reaction_reachable_balances(r, Medium::Basic);
  ASSERT_EQ(reach.size(), 2u);
  std::vector<balance::Balance> expected{
      from_text("O2 + 2 H2O + 2 Au + 4 CN^- -> H2O2 + 2 OH^- + 2 [Au(CN)2]^-"),
      from_text("3 O2 + 6 H2O + 2 Au + 4 CN^- -> 5 H2O2 + 2 OH^- + 2 [Au(CN)2]^-")};
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& b : reach) found = found || same_balance(b, e);
    EXPECT_TRUE(found) << e.to_string();
  }
  for (const auto& b : reach) EXPECT_TRUE(conserves_all(b));
}

TEST(HalfReaction, PhosphorusIodineNeedsOverlappingSplits) {
  auto r = parse_reaction("P2I4 + P4 + H2O -> PH4I + H3PO4");
  auto splits = enumerate_half_reaction_splits(r);
  ASSERT_FALSE(splits.empty());
  for (const auto& s : splits) {
    bool disjoint_r = true, disjoint_p = true;
    for (const auto& a : s.first.reactants)
      for (const auto& b : s.second.reactants) disjoint_r = disjoint_r && a.label != b.label;
    for (const auto& a : s.first.products)
      for (const auto& b : s.second.products) disjoint_p = disjoint_p && a.label != b.label;
    EXPECT_FALSE(disjoint_r && disjoint_p);
  }
  EXPECT_FALSE(half_reaction_reachable_balances(r, Medium::Acidic).empty());
}

TEST(HalfReaction, UniqueReactionReachesItsBalance) {
  auto r = parse_reaction("MnO4^- + Fe^2+ + H^+ -> Mn^2+ + Fe^3+ + H2O");
  auto reach = half_reaction_reachable_balances(r, Medium::Acidic);
  ASSERT_EQ(reach.size(), 1u);
  EXPECT_TRUE(same_balance(reach[0], balance::unique_balance(r)));
  auto single = parse_reaction("Fe^2+ -> Fe^3+ + e^-");
  EXPECT_EQ(enumerate_half_reaction_splits(single).size(), 1u);
}

TEST(Property, HalfReactionOutputsConserve) {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int t = 0; t < 400 && checked < 100; ++t) {
    auto r = random_charged(rng);
    for (const auto& c : half_reaction_candidates(r)) {
      for (auto m : {Medium::Acidic, Medium::Basic}) {
        auto h = balance_half_reaction({c, m});
        EXPECT_TRUE(conserves_all(h.balance)) << h.balance.to_string();
        ++checked;
      }
    }
  }
  EXPECT_GE(checked, 100);
}

// Every balanceable random charged reaction yields at least one half-reaction balance.
TEST(Property, HalfReactionMethodFindsABalance) {
  std::mt19937_64 rng(3);
  int tested = 0;
  for (int t = 0; t < 2000 && tested < 80; ++t) {
    auto r = random_charged(rng);
    if (balance::classify(r).kind == balance::BalanceKind::NoBalance) continue;
    ++tested;
    for (auto m : {Medium::Acidic, Medium::Basic}) {
      auto reach = half_reaction_reachable_balances(r, m);
      EXPECT_FALSE(reach.empty()) << formula::render(r.species(0).composition);
      for (const auto& b : reach) EXPECT_TRUE(conserves_all(b));
    }
  }
  EXPECT_EQ(tested, 80);
}

// Stripping never breaks conservation; lifting can fail when Q and X are not separately conserved.
TEST(Property, SpectatorStripAndLift) {
  std::mt19937_64 rng(12);
  int tested = 0, lifted_ok = 0;
  for (int t = 0; t < 4000 && tested < 60; ++t) {
    auto r = random_charged(rng);
    auto sp = spectator_transform(r);
    auto ext = balance::extreme_balances(sp.transformed);
    if (ext.empty()) continue;
    ++tested;
    for (const auto& b : ext) EXPECT_TRUE(conserves_all(sp.strip(b))) << b.to_string();
    for (const auto& b : balance::extreme_balances(r)) {
      auto lifted = sp.lift(b);
      if (!lifted) continue;
      ++lifted_ok;
      EXPECT_TRUE(balance::conserves(*lifted));
      EXPECT_TRUE(same_balance(sp.strip(*lifted), b));
    }
  }
  EXPECT_EQ(tested, 60);
  EXPECT_GT(lifted_ok, 0);
}
