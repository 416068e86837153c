#include <gtest/gtest.h>

#include <functional>

#include "stoich/corpus.hpp"
#include "stoich/mechanism.hpp"

using namespace stoich;
using namespace stoich::mechanism;
using corpus::int_matrix;

namespace {

// Every integer vector with |c|_1 <= t, by odometer.
void each_l1_point(std::size_t n, long t, const std::function<void(const std::vector<long>&)>& f) {
  std::vector<long> v(n, -t);
  while (true) {
    long s = 0;
    for (long x : v) s += x < 0 ? -x : x;
    if (s <= t) f(v);
    std::size_t i = 0;
    while (i < n && v[i] == t) v[i++] = -t;
    if (i == n) return;
    ++v[i];
  }
}

Mechanism three_species() { return {{"A", "B", "C"}, {0, 1, 2}, {}, int_matrix({{-1, -1}, {1, -1}, {1, 2}})}; }

}  // namespace

TEST(Mechanism, Validation) {
  Mechanism m = three_species();
  EXPECT_NO_THROW(m.validate());
  Mechanism bad = m;
  bad.known = {0, 1};
  EXPECT_THROW(bad.validate(), Error);
  bad = m;
  bad.intermediates = {2};
  EXPECT_THROW(bad.validate(), Error);
  bad = m;
  bad.N = int_matrix({{-1, 1}, {1, 1}, {1, 2}});
  EXPECT_THROW(bad.validate(), Error);
  bad = m;
  bad.N = int_matrix({{-1, -1}, {1, -1}});
  EXPECT_THROW(bad.validate(), DimensionError);
}

TEST(Mechanism, Conservation) {
  auto rep = conservation_report(three_species());
  EXPECT_EQ(rep.mass_space, Subspace::span(3, {to_vector(std::vector<long>{3, 1, 2})}));
  EXPECT_TRUE(rep.conservative);
  ASSERT_TRUE(rep.positive_law);
  EXPECT_EQ(*rep.positive_law, to_vector(std::vector<long>{3, 1, 2}));

  Mechanism grow{{"A", "B"}, {0, 1}, {}, int_matrix({{-1, 2}, {1, -1}})};
  auto g = conservation_report(grow);
  EXPECT_EQ(g.mass_space.dim(), 0u);
  EXPECT_FALSE(g.conservative);
}

TEST(Mechanism, ConservationWithElements) {
  auto m = corpus::data::azomethane();
  auto rep = conservation_report(m, corpus::data::azomethane_elements());
  ASSERT_TRUE(rep.element_space);
  EXPECT_TRUE(rep.mass_space.contains(*rep.element_space));
  ASSERT_TRUE(rep.homology_dim);
  EXPECT_EQ(*rep.homology_dim, 6 - static_cast<long>(ratlin::rank(m.N)));
  EXPECT_TRUE(rep.conservative);
  Matrix wrong = int_matrix({{1, 0, 0, 0, 0, 0, 0, 0, 0}});
  EXPECT_THROW(conservation_report(m, wrong), Error);
}

TEST(Mechanism, ConsistentReactionsAgainstBruteForce) {
  Mechanism m = three_species();
  for (long t = 0; t <= 4; ++t) {
    std::size_t want = 0;
    each_l1_point(3, t, [&](const std::vector<long>& v) {
      if (in_column_cone(m, to_vector(v))) ++want;
    });
    EXPECT_EQ(consistent_reactions(m, t).count(), want) << t;
    EXPECT_EQ(lattice::lattice_points(consistent_region(m, t)).size(), want) << t;
  }
}

TEST(Mechanism, RepresentationsFiniteAndInfinite) {
  auto m = corpus::data::azomethane();
  auto reps = algebraic_representations(m, to_vector(std::vector<long>{-5, 3, 1, 1, 1, 1}));
  ASSERT_EQ(reps.size(), 1u);
  IntVector want;
  for (long x : {3, 1, 1, 1, 1, 1}) want.push_back(x);
  EXPECT_EQ(reps[0], want);
  EXPECT_THROW(algebraic_representations(m, to_vector(std::vector<long>{-5, 3, 1})), DimensionError);

  Mechanism cycle{{"A", "B"}, {0, 1}, {}, int_matrix({{-1, 1, -1}, {1, -1, 1}})};
  EXPECT_FALSE(representations_finite(cycle));
  EXPECT_THROW(algebraic_representations(cycle, to_vector(std::vector<long>{-1, 1})), InfiniteRepresentationsError);
  auto bounded = algebraic_representations(cycle, to_vector(std::vector<long>{-1, 1}), 3);
  // x1 - x2 + x3 = 1 with x >= 0 and sum <= 3.
  EXPECT_EQ(bounded.size(), 5u);
}

TEST(Mechanism, InverseTables) {
  auto a = inverse_mechanism_spaces(9, {0, 1, 2, 3, 4, 5}, {6, 7, 8}, corpus::data::azomethane_elements(),
                                    corpus::data::azomethane_observed(), true);
  EXPECT_EQ(a.table.ns, 6u);
  EXPECT_EQ(a.table.rs, 3u);
  EXPECT_EQ(a.table.pk_rs, 3u);
  EXPECT_EQ(a.table.intersection, 3u);
  EXPECT_EQ(a.table.o, 3u);
  ASSERT_TRUE(a.h);
  EXPECT_TRUE(a.null_space.contains(*a.h));
  EXPECT_TRUE(ratlin::project(*a.h, {0, 1, 2, 3, 4, 5}).contains(a.proj_z_o));
  // The true mechanism's columns lie in the candidate space for its own H.
  auto m = corpus::data::azomethane();
  Subspace h = mechanism_h_space(m.N, corpus::data::azomethane_elements());
  EXPECT_EQ(h.dim(), 6 - ratlin::rank(m.N));
  EXPECT_TRUE(a.candidate_mechanism_space(h).contains(Subspace::column_space(m.N)));
}

TEST(Mechanism, SecondTableAndProjection) {
  auto b = inverse_mechanism_spaces(12, {0, 1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11}, corpus::data::second_elements(),
                                    corpus::data::second_observed(), true);
  EXPECT_EQ(b.table.ns, 7u);
  EXPECT_EQ(b.table.rs, 5u);
  EXPECT_EQ(b.table.o, 6u);
  EXPECT_EQ(b.table.o_mod_pk_rs, 1u);
  EXPECT_EQ(b.proj_z_o.dim(), 1u);
  EXPECT_TRUE(b.z.contains(b.proj_z_o));
  for (const auto& v : b.proj_z_o.basis_vectors())
    for (const auto& w : b.pk_rs.basis_vectors()) EXPECT_EQ(dot(v, w), 0);
  ASSERT_TRUE(b.h);
  EXPECT_TRUE(b.null_space.contains(*b.h));
  EXPECT_THROW(inverse_mechanism_spaces(12, {0, 1}, {2}, corpus::data::second_elements(), corpus::data::second_observed(),
                                        false),
               DimensionError);
}

TEST(Mechanism, Precedence) {
  auto p = precedence_analysis(corpus::data::azomethane());
  std::vector<std::set<std::size_t>> want{{0}, {0, 1}, {0, 1, 2, 3}};
  EXPECT_EQ(p.iterates, want);
  EXPECT_EQ(p.vertex_names, (std::vector<std::string>{"K", "X", "Y", "Z"}));
  for (std::size_t j = 0; j < 6; ++j) EXPECT_TRUE(p.occurs(j));
  EXPECT_EQ(p.level[0], 1u);
  EXPECT_TRUE(order_realizable(p, {1, 0, 0, 0, 0, 0}));
  EXPECT_FALSE(order_realizable(p, {0, 0, 0, 1, 0, 0}));

  // B is never produced, so the second step cannot fire.
  Mechanism stuck{{"A", "C", "B", "D"}, {0, 1}, {2, 3}, int_matrix({{-1, 0}, {0, 1}, {0, -1}, {1, 0}})};
  auto q = precedence_analysis(stuck);
  EXPECT_TRUE(q.occurs(0));
  EXPECT_FALSE(q.occurs(1));
}

TEST(Mechanism, CandidatesAgainstBruteForce) {
  Matrix m = corpus::data::azomethane_elements();
  auto cand = candidate_elementary_reactions(Subspace::null_space(m), 1);
  std::size_t want = 0;
  std::vector<long> v(9, -1);
  while (true) {
    bool pos = false, neg = false;
    for (long x : v) pos = pos || x > 0, neg = neg || x < 0;
    if (pos && neg) {
      Vector y = m * to_vector(v);
      bool zero = true;
      for (const auto& x : y) zero = zero && sgn(x) == 0;
      if (zero) ++want;
    }
    std::size_t i = 0;
    while (i < 9 && v[i] == 1) v[i++] = -1;
    if (i == 9) break;
    ++v[i];
  }
  EXPECT_EQ(cand.vectors.size(), want);
  EXPECT_EQ(cand.lines.size() * 2, want);
  EXPECT_THROW(candidate_elementary_reactions(Subspace::null_space(m), 0), Error);
}
