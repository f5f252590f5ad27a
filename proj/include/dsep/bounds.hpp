#pragma once

#include <cstddef>
#include <optional>

// Closed-form upper/lower bounds on separation probabilities and search costs
// under the random-DAG model.
//
// Position convention: `j` is the 1-based position of the pair's later node,
// so a pair (u, v) of 0-based graph indices with u < v has j = v + 1. Nodes
// before j (other than the pair) are potential noncollider middles, j - 2 of
// them; nodes after j are potential collider middles, n - j of them.
namespace dsep::bounds {

struct BoundInput {
  std::size_t n = 2;
  double p1 = 0.5;
  std::optional<double> p2;
  std::size_t j = 2;
  std::optional<std::size_t> alpha;
  std::optional<double> delta;
};

struct SgsBoundInput {
  std::size_t n = 3;
  double p1 = 0.5;
};

// P(random Bernoulli(p2) Z separates | no edge) <=
//   (1 - p2 p1^2)^(n-j) * (1 - (1-p2) p1^2)^(j-2)
double random_z(const BoundInput& in);

// (1 - (1 - max(p2, 1-p2)) p1^2)^(n-2); never below random_z.
double random_z_simple(const BoundInput& in);

// (1 - p1) * random_z: drops the conditioning on non-adjacency.
double random_z_unconditional(const BoundInput& in);

struct BoundedSize {
  double threshold;    // 0.5 p1^2 (j-2)
  double probability;  // exp(-0.25 p1^2 (j-2) / 2)
};

// Bound on P(some Z with |Z| <= threshold separates | no edge).
BoundedSize bounded_size(const BoundInput& in);
double bounded_size_unconditional(const BoundInput& in);

// Uniform size-alpha Z:
//   (1 - p1^2 (2 - p1^2) alpha/(n-2))^(n-j) * (1 - p1^2)^(j-alpha-2)
// Evaluated as written for every alpha in 0..n-2, including j - alpha - 2 < 0.
double fixed_size(const BoundInput& in);

// Fraction of topologically ordered DAGs on n nodes with at most
// floor(d * C(n,2)) edges. Exact integer arithmetic while C(n,2) < 64,
// log-space otherwise.
double sparse_graph_ratio(std::size_t n, double d);
// Natural log of the same ratio; stays finite once the ratio underflows.
double sparse_graph_log_ratio(std::size_t n, double d);

// 0.5 p1^2 (delta1 n - 2): PC below this c_max has vanishing precision on late pairs.
double pc_cmax_threshold(std::size_t n, double p1, double delta1);
// 0.5 p1 (delta2 n - 2): PC above this c_max makes exponentially many calls on edges.
double pc_adjacency_threshold(std::size_t n, double p1, double delta2);

struct SgsCallBounds {
  double conditional;    // E[C | no edge] >= ((2/(2-p1^2))^(n-2) - 1) / a
  double unconditional;  // E[C] >= p1 2^(n-2) + (1-p1) conditional
  double alpha;          // a = 1 + (2 - p1^2)^-(n-2)
};

SgsCallBounds sgs_calls_lower_bound(const SgsBoundInput& in);

}  // namespace dsep::bounds
