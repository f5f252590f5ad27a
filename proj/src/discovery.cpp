#include "dsep/discovery.hpp"

#include <algorithm>
#include <vector>

#include "dsep/combinations.hpp"
#include "dsep/error.hpp"
#include "dsep/rng.hpp"
#include "dsep/separation.hpp"
#include "dsep/subset_stream.hpp"

namespace dsep {

namespace {

std::vector<NodePair> all_pairs(std::size_t n, PairOrder order) {
  std::vector<NodePair> pairs;
  for (Node i = 0; i < static_cast<Node>(n); ++i)
    for (Node j = i + 1; j < static_cast<Node>(n); ++j) pairs.push_back({i, j});
  if (order == PairOrder::kReverseLexicographic) std::reverse(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

SkeletonResult pc_skeleton(const Dag& dag, const PcConfig& config, const QueryObserver& observe) {
  const std::size_t n = dag.size();
  SkeletonResult result;
  std::vector<NodeSet> adj;
  adj.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    NodeSet s = NodeSet::all(n);
    s.erase(static_cast<Node>(v));
    adj.push_back(std::move(s));
  }
  for (NodePair p : all_pairs(n, PairOrder::kLexicographic)) result.e_pred.insert(p);

  SeparationChecker checker(dag);
  for (NodePair pair : all_pairs(n, config.pair_order)) {
    const Node x = pair.i;
    const Node y = pair.j;
    // Candidate pool is fixed when the pair's turn starts.
    NodeSet side_x = adj[x];
    NodeSet side_y = adj[y];
    if (config.full_powerset) {
      side_x = NodeSet::all(n);
      side_x.erase(x);
      side_x.erase(y);
      side_y = side_x;
    }
    side_x.erase(y);
    side_y.erase(x);
    const auto pool_x = side_x.members();
    const auto pool_y = side_y.members();

    std::size_t top = std::max(pool_x.size(), pool_y.size());
    if (config.c_max) top = std::min(top, *config.c_max);
    std::vector<std::size_t> sizes;
    for (std::size_t s = 0; s <= top; ++s) sizes.push_back(s);
    if (config.subset_order == SubsetOrder::kSizeDescending) std::reverse(sizes.begin(), sizes.end());

    std::uint64_t calls = 0;
    std::optional<ConditioningSet> found;
    auto query = [&](std::span<const Node> chosen) {
      ConditioningSet z(n, chosen);
      ++calls;
      if (observe) observe(pair, z);
      if (checker.separated(pair, z)) {
        found = std::move(z);
        return true;
      }
      return false;
    };

    for (std::size_t s : sizes) {
      if (for_each_combination(pool_x, s, query)) break;
      const bool hit = for_each_combination(pool_y, s, [&](std::span<const Node> chosen) {
        const bool duplicate =
            std::all_of(chosen.begin(), chosen.end(), [&](Node v) { return side_x.contains(v); });
        return duplicate ? false : query(chosen);
      });
      if (hit) break;
    }

    result.stats.record(pair, calls);
    if (found) {
      result.e_pred.erase(pair);
      result.separators.emplace(pair, std::move(*found));
      adj[x].erase(y);
      adj[y].erase(x);
    }
  }
  return result;
}

SgsPairResult uniform_sgs_pair(const Dag& dag, NodePair pair, const SgsConfig& config,
                               const QueryObserver& observe) {
  if (config.call_cap && *config.call_cap == 0) throw DomainError("call_cap", "must be at least 1");
  dag.check_node(pair.i, "x");
  dag.check_node(pair.j, "y");
  const auto pool = complement_of_pair(dag.size(), pair);
  SubsetPermutation stream(static_cast<unsigned>(pool.size()), config.seed);
  SeparationChecker checker(dag);

  SgsPairResult result;
  ConditioningSet z(dag.size());
  while (!config.call_cap || result.calls < *config.call_cap) {
    const auto index = stream.next();
    if (!index) break;
    z.clear();
    for (std::size_t b = 0; b < pool.size(); ++b)
      if ((*index >> b) & 1U) z.insert(pool[b]);
    ++result.calls;
    if (observe) observe(pair, z);
    if (checker.separated(pair, z)) {
      result.separator = z;
      break;
    }
  }
  return result;
}

SkeletonResult uniform_sgs_skeleton(const Dag& dag, const SgsConfig& config) {
  SkeletonResult result;
  const auto pairs = all_pairs(dag.size(), PairOrder::kLexicographic);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    SgsConfig pair_config = config;
    pair_config.seed = split_seed(config.seed, k);
    auto outcome = uniform_sgs_pair(dag, pairs[k], pair_config);
    result.stats.record(pairs[k], outcome.calls);
    if (outcome.separator)
      result.separators.emplace(pairs[k], std::move(*outcome.separator));
    else
      result.e_pred.insert(pairs[k]);
  }
  return result;
}

double empirical_precision(std::span<const PrecisionRecord> records) {
  std::size_t nonadjacent = 0;
  std::size_t removed = 0;
  for (const auto& r : records) {
    if (!r.truly_nonadjacent) continue;
    ++nonadjacent;
    if (r.removed) ++removed;
  }
  if (nonadjacent == 0) throw DomainError("records", "no truly nonadjacent pair");
  return static_cast<double>(removed) / static_cast<double>(nonadjacent);
}

std::set<NodePair> true_skeleton(const Dag& dag) {
  std::set<NodePair> out;
  for (auto [u, v] : dag.edges()) out.insert({u, v});
  return out;
}

std::uint64_t union_of_powersets_count(const NodeSet& a, const NodeSet& b,
                                       std::optional<std::size_t> c_max) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t nab = (a & b).size();
  const std::size_t top = c_max ? *c_max : std::max(na, nb);
  double total = 0.0;
  for (std::size_t s = 0; s <= top; ++s) total += binomial(na, s) + binomial(nb, s) - binomial(nab, s);
  return static_cast<std::uint64_t>(total);
}

}  // namespace dsep
