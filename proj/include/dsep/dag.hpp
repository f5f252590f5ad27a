#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsep/node_set.hpp"

namespace dsep {

// Unordered node pair stored with i < j.
struct NodePair {
  Node i = 0;
  Node j = 0;

  // Orders the two endpoints; rejects a == b.
  static NodePair of(Node a, Node b);

  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

struct GenParams {
  std::size_t n = 0;
  double p1 = 0.5;
  std::uint64_t seed = 0;
};

// One candidate edge whose presence is fixed instead of drawn.
struct EdgeConstraint {
  NodePair pair;
  bool present = false;
};

// Immutable DAG over nodes 0..n-1 whose edges all point from lower to higher
// index. Node k is the model's v_{k+1}.
//
// Stored as a dense upper-triangular bit matrix (children rows) together with
// its transpose (parents rows).
class Dag {
 public:
  // Validates every edge: u < v < n, no duplicates.
  static Dag from_edges(std::size_t n, std::span<const std::pair<Node, Node>> edges);
  static Dag empty(std::size_t n);
  static Dag complete(std::size_t n);

  std::size_t size() const noexcept { return children_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  // Directed edge u -> v.
  bool has_edge(Node u, Node v) const noexcept { return children_[u].contains(v); }
  bool adjacent(Node a, Node b) const noexcept {
    return children_[a].contains(b) || children_[b].contains(a);
  }

  const NodeSet& children(Node v) const noexcept { return children_[v]; }
  const NodeSet& parents(Node v) const noexcept { return parents_[v]; }
  NodeSet neighbors(Node v) const { return children_[v] | parents_[v]; }

  // Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<Node, Node>> edges() const;

  void check_node(Node v, const char* field) const;

 private:
  explicit Dag(std::size_t n);
  void add_edge(Node u, Node v);

  std::vector<NodeSet> children_;
  std::vector<NodeSet> parents_;
  std::size_t edge_count_ = 0;
};

// Each candidate edge (u, v), u < v, drawn in lexicographic order with
// probability p1. A constrained edge still consumes its draw, so the rest of
// the graph is the same as the unconstrained graph for that seed.
Dag generate_random_dag(const GenParams& params,
                        std::optional<EdgeConstraint> constraint = std::nullopt);

// Nodes reachable from v by a directed path, excluding v.
NodeSet descendants(const Dag& dag, Node v);

// seeds plus every node with a directed path into seeds.
NodeSet ancestral_closure(const Dag& dag, const NodeSet& seeds);

// All i < j with no edge between them, lexicographic.
std::vector<NodePair> nonadjacent_pairs(const Dag& dag);

// Uniform sample without replacement, in draw order.
std::vector<NodePair> sample_pairs(std::span<const NodePair> pairs, std::size_t count,
                                   std::uint64_t seed);

// |E| / C(n, 2).
double density(const Dag& dag);

// Text format: "dag <n>" then one "<u> <v>" line per edge, sorted, LF-terminated.
std::string write_dag_text(const Dag& dag);
Dag parse_dag_text(std::string_view text);
Dag read_dag_file(const std::string& path);
void write_dag_file(const Dag& dag, const std::string& path);

}  // namespace dsep
