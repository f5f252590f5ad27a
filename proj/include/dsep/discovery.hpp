#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>

#include "dsep/dag.hpp"
#include "dsep/node_set.hpp"

// Skeleton recovery (PC and UniformSGS) against a perfect d-separation
// oracle. Every oracle invocation is counted.
namespace dsep {

struct OracleStats {
  std::uint64_t total_calls = 0;
  std::map<NodePair, std::uint64_t> per_pair_calls;

  void record(NodePair pair, std::uint64_t calls) {
    per_pair_calls[pair] += calls;
    total_calls += calls;
  }
};

enum class PairOrder { kLexicographic, kReverseLexicographic };

// Both orders enumerate each size lexicographically, x's side before y's.
enum class SubsetOrder { kSizeAscending, kSizeDescending };

struct PcConfig {
  std::optional<std::size_t> c_max;  // nullopt: unbounded
  PairOrder pair_order = PairOrder::kLexicographic;
  SubsetOrder subset_order = SubsetOrder::kSizeAscending;
  // Search 2^(V - {x,y}) instead of the two adjacency powersets.
  bool full_powerset = false;
};

inline constexpr std::uint64_t kDefaultSgsCallCap = 1'000'000;

struct SgsConfig {
  std::optional<std::uint64_t> call_cap = kDefaultSgsCallCap;  // per pair; nullopt: uncapped
  std::uint64_t seed = 0;
};

struct SkeletonResult {
  std::set<NodePair> e_pred;
  OracleStats stats;
  std::map<NodePair, ConditioningSet> separators;
};

using QueryObserver = std::function<void(NodePair, const ConditioningSet&)>;

SkeletonResult pc_skeleton(const Dag& dag, const PcConfig& config,
                           const QueryObserver& observe = {});

struct SgsPairResult {
  std::optional<ConditioningSet> separator;
  std::uint64_t calls = 0;
};

// Streams subsets of V - {i, j} in uniformly random order without repetition
// until one separates the pair or the stream (or cap) runs out. The seed is
// config.seed.
SgsPairResult uniform_sgs_pair(const Dag& dag, NodePair pair, const SgsConfig& config,
                               const QueryObserver& observe = {});

// uniform_sgs_pair over every pair in lexicographic order; pair number k uses
// seed split_seed(config.seed, k).
SkeletonResult uniform_sgs_skeleton(const Dag& dag, const SgsConfig& config);

struct PrecisionRecord {
  NodePair pair;
  bool removed = false;
  bool truly_nonadjacent = false;
};

// Removed-and-nonadjacent over nonadjacent.
double empirical_precision(std::span<const PrecisionRecord> records);

std::set<NodePair> true_skeleton(const Dag& dag);

// Size of { Z in 2^a ∪ 2^b : |Z| <= c_max }.
std::uint64_t union_of_powersets_count(const NodeSet& a, const NodeSet& b,
                                       std::optional<std::size_t> c_max = std::nullopt);

}  // namespace dsep
