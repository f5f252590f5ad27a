#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dsep/dag.hpp"
#include "dsep/node_set.hpp"
#include "dsep/rng.hpp"

namespace dsep {

// Reusable d-separation query engine for one graph. Not thread-safe; create
// one per thread. The Dag must outlive the checker.
class SeparationChecker {
 public:
  explicit SeparationChecker(const Dag& dag);

  // Active-trail reachability: closes Z under ancestors, then walks
  // (node, direction) states from pair.i. Rejects Z that touches the pair.
  bool separated(NodePair pair, const ConditioningSet& z);
  // Same query with the walk started at `source`; either endpoint order.
  bool separated_from(Node source, Node target, const ConditioningSet& z);

  const Dag& dag() const noexcept { return *dag_; }

 private:
  bool walk(Node source, Node target, const ConditioningSet& z);

  const Dag* dag_;
  NodeSet active_;   // Z and its ancestors: colliders here pass the ball
  NodeSet up_seen_;  // reached from a child
  NodeSet down_seen_;  // reached from a parent
  std::vector<std::pair<Node, bool>> stack_;
};

void check_query(const Dag& dag, NodePair pair, const ConditioningSet& z);

bool is_d_separated(const Dag& dag, NodePair pair, const ConditioningSet& z);

// Definition-literal oracle: enumerates every simple undirected path.
inline constexpr std::size_t kBruteForceMaxNodes = 12;
bool is_d_separated_bruteforce(const Dag& dag, NodePair pair, const ConditioningSet& z,
                               std::size_t max_nodes = kBruteForceMaxNodes);

// Every existing length-2 path i - k - j is pseudoblocked: a collider middle
// outside Z or a noncollider middle inside Z. The direct edge and longer
// paths are ignored.
bool is_pseudoseparated(const Dag& dag, NodePair pair, const ConditioningSet& z);

struct PathCensus {
  std::size_t b_nc = 0;  // existing noncollider middles (k < j)
  std::size_t b_c = 0;   // existing collider middles (k > j)
  std::size_t q_nc_capacity = 0;
  std::size_t q_c_capacity = 0;
};

PathCensus path_census(const Dag& dag, NodePair pair);

// Middle nodes of existing length-2 paths, split by kind.
struct LengthTwoMiddles {
  NodeSet noncollider;
  NodeSet collider;
};
LengthTwoMiddles length_two_middles(const Dag& dag, NodePair pair);

struct ViolationCount {
  std::size_t m_c = 0;   // |Z ∩ V_c|
  std::size_t m_nc = 0;  // |V_nc − Z|
  std::size_t total() const noexcept { return m_c + m_nc; }
};

// Graph-independent: counts potential length-2 paths that would break
// pseudoseparation if they existed.
ViolationCount violation_count(std::size_t n, NodePair pair, const ConditioningSet& z);

// Each node of V − {i, j} included independently with probability p2.
ConditioningSet sample_bernoulli_set(std::size_t n, NodePair pair, double p2, std::uint64_t seed);
ConditioningSet sample_bernoulli_set(std::size_t n, NodePair pair, double p2, Rng& rng);

// Uniform among the size-alpha subsets of V − {i, j}.
ConditioningSet sample_fixed_size_set(std::size_t n, NodePair pair, std::size_t alpha,
                                      std::uint64_t seed);
ConditioningSet sample_fixed_size_set(std::size_t n, NodePair pair, std::size_t alpha, Rng& rng);

struct MinSeparatorOptions {
  // Upper limit on sum_{s <= s_max} C(n-2, s).
  double budget = 1e7;
  // Restrict candidates to ancestors of the pair that contain every existing
  // noncollider middle. Exact: minimum separators lie inside An({i, j}) and
  // must pseudoseparate.
  bool prune = true;
};

// Smallest d-separating set with at most s_max members, searched by size then
// lexicographically over the candidate pool. Absent for adjacent pairs.
std::optional<ConditioningSet> find_min_separator(const Dag& dag, NodePair pair,
                                                  std::size_t s_max,
                                                  const MinSeparatorOptions& options = {});

std::optional<std::size_t> min_separator_size(const Dag& dag, NodePair pair, std::size_t s_max,
                                              const MinSeparatorOptions& options = {});

// Number of subsets of V − {i, j} that fail to d-separate the pair.
inline constexpr std::size_t kEnumerationMaxNodes = 20;
std::uint64_t count_nonseparating_sets(const Dag& dag, NodePair pair,
                                       std::size_t max_nodes = kEnumerationMaxNodes);

// Nodes of V − {i, j} in ascending order.
std::vector<Node> complement_of_pair(std::size_t n, NodePair pair);

}  // namespace dsep
