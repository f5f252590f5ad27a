#include <gtest/gtest.h>

#include <cmath>

#include "dsep/dag.hpp"
#include "dsep/error.hpp"
#include "dsep/separation.hpp"
#include "support.hpp"

using namespace dsep;
using dsep::testing::all_subsets;
using dsep::testing::make_dag;
using dsep::testing::set_of;

namespace {

const Dag kChain = make_dag(3, {{0, 1}, {1, 2}});
const Dag kCollider = make_dag(3, {{0, 2}, {1, 2}});
const Dag kColliderChild = make_dag(4, {{0, 2}, {1, 2}, {2, 3}});

bool both(const Dag& d, NodePair p, const NodeSet& z) {
  const bool fast = is_d_separated(d, p, z);
  EXPECT_EQ(fast, is_d_separated_bruteforce(d, p, z));
  return fast;
}

}  // namespace

TEST(DSeparation, TextbookCases) {
  EXPECT_TRUE(both(kChain, {0, 2}, set_of(kChain, {1})));
  EXPECT_FALSE(both(kChain, {0, 2}, set_of(kChain, {})));
  EXPECT_TRUE(both(kCollider, {0, 1}, set_of(kCollider, {})));
  EXPECT_FALSE(both(kCollider, {0, 1}, set_of(kCollider, {2})));
  EXPECT_FALSE(both(kColliderChild, {0, 1}, set_of(kColliderChild, {3})));
}

TEST(DSeparation, EdgelessAndComplete) {
  const Dag e = Dag::empty(5);
  EXPECT_TRUE(both(e, {1, 3}, NodeSet(5)));
  const Dag c = Dag::complete(3);
  EXPECT_FALSE(both(c, {0, 1}, NodeSet(3)));
  EXPECT_FALSE(both(c, {0, 1}, set_of(c, {2})));
}

TEST(DSeparation, RejectsBadQueries) {
  EXPECT_THROW(is_d_separated(kChain, {0, 2}, set_of(kChain, {0})), DomainError);
  EXPECT_THROW(is_d_separated(kChain, {0, 3}, NodeSet(3)), DomainError);
  EXPECT_THROW(is_d_separated(kChain, {0, 2}, NodeSet(4)), DomainError);
  EXPECT_THROW(is_d_separated_bruteforce(Dag::empty(13), {0, 1}, NodeSet(13)), DomainError);
}

TEST(DSeparation, MatchesBruteForceExhaustively) {
  for (double p1 : {0.3, 0.5, 0.7}) {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
      const Dag d = generate_random_dag({6, p1, seed});
      SeparationChecker checker(d);
      for (NodePair p : nonadjacent_pairs(d))
        for (const auto& z : all_subsets(6, p)) {
          const bool fast = checker.separated(p, z);
          ASSERT_EQ(fast, is_d_separated_bruteforce(d, p, z)) << "seed " << seed << " z " << z.to_string();
          // Symmetric in the endpoints.
          ASSERT_EQ(fast, checker.separated_from(p.j, p.i, z));
        }
    }
  }
}

TEST(DSeparation, LargerGraphsAgainstBruteForce) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Dag d = generate_random_dag({10, 0.3, seed});
    for (std::uint64_t k = 0; k < 20; ++k) {
      const NodePair p{static_cast<Node>(k % 3), static_cast<Node>(7 + k % 3)};
      const auto z = sample_bernoulli_set(10, p, 0.4, seed * 100 + k);
      ASSERT_EQ(is_d_separated(d, p, z), is_d_separated_bruteforce(d, p, z));
    }
  }
}

TEST(Pseudoseparation, Examples) {
  EXPECT_TRUE(is_pseudoseparated(kColliderChild, {0, 1}, set_of(kColliderChild, {3})));
  EXPECT_FALSE(is_d_separated(kColliderChild, {0, 1}, set_of(kColliderChild, {3})));
  EXPECT_TRUE(is_pseudoseparated(kChain, {0, 2}, set_of(kChain, {1})));
  EXPECT_FALSE(is_pseudoseparated(kChain, {0, 2}, set_of(kChain, {})));
}

TEST(Pseudoseparation, ImpliedByDSeparation) {
  bool witness = false;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Dag d = generate_random_dag({6, 0.5, seed});
    for (Node i = 0; i < 6; ++i)
      for (Node j = i + 1; j < 6; ++j)
        for (const auto& z : all_subsets(6, {i, j})) {
          const bool ds = is_d_separated(d, {i, j}, z);
          const bool ps = is_pseudoseparated(d, {i, j}, z);
          if (ds) ASSERT_TRUE(ps);
          witness |= ps && !ds;
        }
  }
  EXPECT_TRUE(witness);
}

TEST(Pseudoseparation, DroppingNoncolliderMiddleBreaksIt) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Dag d = generate_random_dag({7, 0.5, seed});
    for (NodePair p : nonadjacent_pairs(d)) {
      const auto middles = length_two_middles(d, p);
      for (const auto& z : all_subsets(7, p)) {
        if (!is_d_separated(d, p, z)) continue;
        for (Node k : middles.noncollider.members()) {
          ASSERT_TRUE(z.contains(k));
          NodeSet smaller = z;
          smaller.erase(k);
          ASSERT_FALSE(is_pseudoseparated(d, p, smaller));
        }
      }
    }
  }
}

TEST(PathCensus, Examples) {
  const Dag d = make_dag(4, {{0, 1}, {1, 2}, {0, 3}, {2, 3}});
  const auto c = path_census(d, {0, 2});
  EXPECT_EQ(c.b_nc, 1u);
  EXPECT_EQ(c.b_c, 1u);
  EXPECT_EQ(c.q_nc_capacity, 1u);
  EXPECT_EQ(c.q_c_capacity, 1u);
  const auto e = path_census(Dag::empty(6), {1, 4});
  EXPECT_EQ(e.b_nc + e.b_c, 0u);
  EXPECT_EQ(e.q_nc_capacity, 3u);
  EXPECT_EQ(e.q_c_capacity, 1u);
}

TEST(PathCensus, CountsMatchDirectEdgeScan) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Dag d = generate_random_dag({15, 0.4, seed});
    const NodePair p{3, 9};
    std::size_t nc = 0, c = 0;
    for (Node k = 0; k < 15; ++k) {
      if (k == p.i || k == p.j) continue;
      if (d.adjacent(k, p.i) && d.adjacent(k, p.j)) (k > p.j ? c : nc)++;
    }
    const auto census = path_census(d, p);
    EXPECT_EQ(census.b_nc, nc);
    EXPECT_EQ(census.b_c, c);
  }
}

TEST(ViolationCount, Examples) {
  // 1-based i=2, j=4 on six nodes.
  const NodePair p{1, 3};
  auto empty = violation_count(6, p, NodeSet(6));
  EXPECT_EQ(empty.m_nc, 2u);
  EXPECT_EQ(empty.m_c, 0u);
  auto full = violation_count(6, p, NodeSet(6, {0, 2, 4, 5}));
  EXPECT_EQ(full.m_nc, 0u);
  EXPECT_EQ(full.m_c, 2u);
  EXPECT_EQ(full.total(), 2u);
}

TEST(ViolationCount, CountingIdentity) {
  const std::size_t n = 9;
  const NodePair p{2, 5};
  const std::size_t j = 6;
  for (const auto& z : all_subsets(n, p)) {
    const auto m = violation_count(n, p, z);
    const auto alpha = z.size();
    EXPECT_EQ(static_cast<long>(m.m_nc), static_cast<long>(m.m_c) + static_cast<long>(j) - static_cast<long>(alpha) - 2);
  }
}

TEST(Samplers, BernoulliFrequencyAndExclusion) {
  const int seeds = 10000;
  const double p2 = 0.3;
  int hits = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto z = sample_bernoulli_set(8, {2, 5}, p2, static_cast<std::uint64_t>(s));
    ASSERT_FALSE(z.contains(2));
    ASSERT_FALSE(z.contains(5));
    hits += z.contains(6);
  }
  EXPECT_NEAR(hits / double(seeds), p2, 4 * std::sqrt(p2 * (1 - p2) / seeds));
  EXPECT_TRUE(sample_bernoulli_set(2, {0, 1}, 0.5, 1).empty());
  EXPECT_THROW(sample_bernoulli_set(5, {0, 1}, 1.0, 1), DomainError);
}

TEST(Samplers, FixedSize) {
  EXPECT_TRUE(sample_fixed_size_set(7, {1, 4}, 0, 3).empty());
  EXPECT_EQ(sample_fixed_size_set(7, {1, 4}, 5, 3), NodeSet(7, {0, 2, 3, 5, 6}));
  EXPECT_THROW(sample_fixed_size_set(7, {1, 4}, 6, 3), DomainError);
  for (std::uint64_t s = 0; s < 200; ++s) EXPECT_EQ(sample_fixed_size_set(12, {0, 11}, 4, s).size(), 4u);

  const int seeds = 9000;
  std::vector<int> hits(5);
  for (int s = 0; s < seeds; ++s) {
    const auto z = sample_fixed_size_set(5, {0, 4}, 1, static_cast<std::uint64_t>(s));
    for (Node v : z.members()) hits[v]++;
  }
  EXPECT_EQ(hits[0] + hits[4], 0);
  const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / seeds);
  for (Node v = 1; v <= 3; ++v) EXPECT_NEAR(hits[v] / double(seeds), 1.0 / 3, 4 * se);
}

TEST(MinSeparator, Examples) {
  EXPECT_EQ(min_separator_size(kChain, {0, 2}, 2), 1u);
  EXPECT_EQ(min_separator_size(kCollider, {0, 1}, 2), 0u);
  EXPECT_FALSE(min_separator_size(kChain, {0, 1}, 1).has_value());
  EXPECT_FALSE(min_separator_size(kChain, {0, 2}, 0).has_value());
  EXPECT_EQ(find_min_separator(kChain, {0, 2}, 1), set_of(kChain, {1}));
}

TEST(MinSeparator, BudgetGuard) {
  MinSeparatorOptions tight;
  tight.budget = 100;
  EXPECT_THROW(min_separator_size(Dag::empty(30), {0, 29}, 3, tight), DomainError);
}

TEST(MinSeparator, PrunedSearchMatchesExhaustiveOracle) {
  MinSeparatorOptions plain;
  plain.prune = false;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Dag d = generate_random_dag({8, seed % 2 ? 0.5 : 0.3, seed});
    for (NodePair p : nonadjacent_pairs(d)) {
      // Smallest size found by brute-force d-separation over all subsets.
      std::optional<std::size_t> best;
      for (const auto& z : all_subsets(8, p))
        if ((!best || z.size() < *best) && is_d_separated_bruteforce(d, p, z)) best = z.size();
      ASSERT_TRUE(best.has_value());
      const auto pruned = min_separator_size(d, p, 6);
      ASSERT_EQ(pruned, best) << "seed " << seed;
      ASSERT_EQ(min_separator_size(d, p, 6, plain), best);
      EXPECT_GE(*pruned, path_census(d, p).b_nc);
      const auto witness = find_min_separator(d, p, 6);
      ASSERT_TRUE(witness.has_value());
      EXPECT_TRUE(is_d_separated(d, p, *witness));
    }
  }
}

TEST(NonseparatingSets, Examples) {
  EXPECT_EQ(count_nonseparating_sets(Dag::empty(6), {1, 3}), 0u);
  EXPECT_EQ(count_nonseparating_sets(Dag::complete(6), {1, 3}), 16u);
  EXPECT_EQ(count_nonseparating_sets(kChain, {0, 2}), 1u);
  EXPECT_THROW(count_nonseparating_sets(Dag::empty(21), {0, 1}), DomainError);
}

TEST(NonseparatingSets, MatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Dag d = generate_random_dag({8, 0.5, seed});
    const NodePair p{1, 6};
    std::uint64_t k = 0;
    for (const auto& z : all_subsets(8, p)) k += !is_d_separated_bruteforce(d, p, z);
    EXPECT_EQ(count_nonseparating_sets(d, p), k);
  }
}
