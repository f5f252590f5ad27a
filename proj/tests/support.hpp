#pragma once

#include <utility>
#include <vector>

#include "dsep/dag.hpp"

namespace dsep::testing {

inline Dag make_dag(std::size_t n, std::vector<std::pair<Node, Node>> edges) {
  return Dag::from_edges(n, edges);
}

inline NodeSet set_of(const Dag& dag, std::initializer_list<Node> members) {
  return NodeSet(dag.size(), members);
}

// Every subset of V - {i, j} as a NodeSet, in bitmask order.
inline std::vector<NodeSet> all_subsets(std::size_t n, NodePair pair) {
  std::vector<Node> pool;
  for (Node v = 0; v < static_cast<Node>(n); ++v)
    if (v != pair.i && v != pair.j) pool.push_back(v);
  std::vector<NodeSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pool.size()); ++mask) {
    NodeSet z(n);
    for (std::size_t b = 0; b < pool.size(); ++b)
      if (mask >> b & 1) z.insert(pool[b]);
    out.push_back(z);
  }
  return out;
}

}  // namespace dsep::testing
