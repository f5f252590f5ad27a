#include "dsep/separation.hpp"

#include <bit>

#include "dsep/combinations.hpp"
#include "dsep/error.hpp"

namespace dsep {

namespace {

void require_pair(const Dag& dag, NodePair pair) {
  dag.check_node(pair.i, "x");
  dag.check_node(pair.j, "y");
  if (pair.i >= pair.j) throw DomainError("pair", "expected i < j");
}

void require_probability(double p, const char* field) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(field, "must lie in (0,1)");
}

// Pushes every member of `next` not yet in `seen`, marking it.
void push_unseen(const NodeSet& next, NodeSet& seen, bool from_child,
                 std::vector<std::pair<Node, bool>>& stack) {
  const auto src = next.words();
  const auto dst = seen.words();
  for (std::size_t w = 0; w < src.size(); ++w) {
    std::uint64_t fresh = src[w] & ~dst[w];
    dst[w] |= fresh;
    while (fresh != 0) {
      stack.emplace_back(static_cast<Node>(w * 64 + static_cast<std::size_t>(std::countr_zero(fresh))),
                         from_child);
      fresh &= fresh - 1;
    }
  }
}

}  // namespace

std::vector<Node> complement_of_pair(std::size_t n, NodePair pair) {
  std::vector<Node> out;
  out.reserve(n >= 2 ? n - 2 : 0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = static_cast<Node>(k);
    if (v != pair.i && v != pair.j) out.push_back(v);
  }
  return out;
}

void check_query(const Dag& dag, NodePair pair, const ConditioningSet& z) {
  require_pair(dag, pair);
  if (z.universe() != dag.size())
    throw DomainError("z", "universe " + std::to_string(z.universe()) + " does not match n=" +
                               std::to_string(dag.size()));
  if (z.contains(pair.i) || z.contains(pair.j))
    throw DomainError("z", "conditioning set overlaps the queried pair");
}

SeparationChecker::SeparationChecker(const Dag& dag)
    : dag_(&dag), active_(dag.size()), up_seen_(dag.size()), down_seen_(dag.size()) {
  stack_.reserve(2 * dag.size());
}

bool SeparationChecker::separated(NodePair pair, const ConditioningSet& z) {
  check_query(*dag_, pair, z);
  return walk(pair.i, pair.j, z);
}

bool SeparationChecker::separated_from(Node source, Node target, const ConditioningSet& z) {
  check_query(*dag_, NodePair::of(source, target), z);
  return walk(source, target, z);
}

bool SeparationChecker::walk(Node source, Node target, const ConditioningSet& z) {
  const Dag& dag = *dag_;
  if (dag.adjacent(source, target)) return false;

  active_ = z;
  for (std::size_t k = dag.size(); k-- > 0;)
    if (active_.contains(static_cast<Node>(k))) active_ |= dag.parents(static_cast<Node>(k));

  up_seen_.clear();
  down_seen_.clear();
  stack_.clear();
  up_seen_.insert(source);
  stack_.emplace_back(source, true);

  while (!stack_.empty()) {
    const auto [v, from_child] = stack_.back();
    stack_.pop_back();
    if (v == target) return false;
    const bool in_z = z.contains(v);
    if (from_child) {
      // Trail arrives against an edge: v is a noncollider either way.
      if (!in_z) {
        push_unseen(dag.parents(v), up_seen_, true, stack_);
        push_unseen(dag.children(v), down_seen_, false, stack_);
      }
    } else {
      // Trail arrives along an edge: continuing down keeps v a noncollider,
      // turning back up makes v a collider.
      if (!in_z) push_unseen(dag.children(v), down_seen_, false, stack_);
      if (active_.contains(v)) push_unseen(dag.parents(v), up_seen_, true, stack_);
    }
  }
  return true;
}

bool is_d_separated(const Dag& dag, NodePair pair, const ConditioningSet& z) {
  SeparationChecker checker(dag);
  return checker.separated(pair, z);
}

bool is_d_separated_bruteforce(const Dag& dag, NodePair pair, const ConditioningSet& z,
                               std::size_t max_nodes) {
  if (dag.size() > max_nodes)
    throw DomainError("n", "brute force limited to " + std::to_string(max_nodes) + " nodes");
  check_query(dag, pair, z);

  const std::size_t n = dag.size();
  std::vector<NodeSet> desc;
  desc.reserve(n);
  for (std::size_t v = 0; v < n; ++v) desc.push_back(descendants(dag, static_cast<Node>(v)));

  auto blocked = [&](const std::vector<Node>& path) {
    for (std::size_t t = 1; t + 1 < path.size(); ++t) {
      const Node prev = path[t - 1];
      const Node mid = path[t];
      const Node next = path[t + 1];
      const bool collider = dag.has_edge(prev, mid) && dag.has_edge(next, mid);
      if (collider) {
        if (!z.contains(mid) && !desc[mid].intersects(z)) return true;
      } else if (z.contains(mid)) {
        return true;
      }
    }
    return false;
  };

  std::vector<Node> path{pair.i};
  std::vector<bool> on_path(n, false);
  on_path[pair.i] = true;
  bool open_path_found = false;

  auto dfs = [&](auto&& self, Node v) -> void {
    if (open_path_found) return;
    if (v == pair.j) {
      if (!blocked(path)) open_path_found = true;
      return;
    }
    for (std::size_t w = 0; w < n; ++w) {
      const auto u = static_cast<Node>(w);
      if (on_path[w] || !dag.adjacent(v, u)) continue;
      on_path[w] = true;
      path.push_back(u);
      self(self, u);
      path.pop_back();
      on_path[w] = false;
    }
  };
  dfs(dfs, pair.i);
  return !open_path_found;
}

LengthTwoMiddles length_two_middles(const Dag& dag, NodePair pair) {
  require_pair(dag, pair);
  LengthTwoMiddles out{NodeSet(dag.size()), NodeSet(dag.size())};
  const NodeSet common = dag.neighbors(pair.i) & dag.neighbors(pair.j);
  common.for_each([&](Node k) {
    if (dag.has_edge(pair.i, k) && dag.has_edge(pair.j, k))
      out.collider.insert(k);
    else
      out.noncollider.insert(k);
  });
  return out;
}

bool is_pseudoseparated(const Dag& dag, NodePair pair, const ConditioningSet& z) {
  check_query(dag, pair, z);
  const auto middles = length_two_middles(dag, pair);
  return middles.noncollider.is_subset_of(z) && !middles.collider.intersects(z);
}

PathCensus path_census(const Dag& dag, NodePair pair) {
  const auto middles = length_two_middles(dag, pair);
  PathCensus census;
  census.b_nc = middles.noncollider.size();
  census.b_c = middles.collider.size();
  // V_nc = {k < j, k != i}, V_c = {k > j} with 0-based j.
  census.q_nc_capacity = static_cast<std::size_t>(pair.j) - 1;
  census.q_c_capacity = dag.size() - 1 - static_cast<std::size_t>(pair.j);
  return census;
}

ViolationCount violation_count(std::size_t n, NodePair pair, const ConditioningSet& z) {
  if (pair.i < 0 || pair.i >= pair.j || static_cast<std::size_t>(pair.j) >= n)
    throw DomainError("pair", "out of range");
  if (z.universe() != n) throw DomainError("z", "universe does not match n");
  if (z.contains(pair.i) || z.contains(pair.j))
    throw DomainError("z", "conditioning set overlaps the queried pair");
  ViolationCount out;
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = static_cast<Node>(k);
    if (v == pair.i || v == pair.j) continue;
    if (v < pair.j && !z.contains(v)) ++out.m_nc;
    if (v > pair.j && z.contains(v)) ++out.m_c;
  }
  return out;
}

ConditioningSet sample_bernoulli_set(std::size_t n, NodePair pair, double p2, Rng& rng) {
  require_probability(p2, "p2");
  ConditioningSet z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = static_cast<Node>(k);
    if (v == pair.i || v == pair.j) continue;
    if (rng.bernoulli(p2)) z.insert(v);
  }
  return z;
}

ConditioningSet sample_bernoulli_set(std::size_t n, NodePair pair, double p2, std::uint64_t seed) {
  Rng rng(seed);
  return sample_bernoulli_set(n, pair, p2, rng);
}

ConditioningSet sample_fixed_size_set(std::size_t n, NodePair pair, std::size_t alpha, Rng& rng) {
  auto pool = complement_of_pair(n, pair);
  if (alpha > pool.size())
    throw DomainError("alpha", "must lie in 0.." + std::to_string(pool.size()));
  ConditioningSet z(n);
  for (std::size_t t = 0; t < alpha; ++t) {
    const auto r = t + rng.below(pool.size() - t);
    std::swap(pool[t], pool[r]);
    z.insert(pool[t]);
  }
  return z;
}

ConditioningSet sample_fixed_size_set(std::size_t n, NodePair pair, std::size_t alpha,
                                      std::uint64_t seed) {
  Rng rng(seed);
  return sample_fixed_size_set(n, pair, alpha, rng);
}

std::optional<ConditioningSet> find_min_separator(const Dag& dag, NodePair pair,
                                                  std::size_t s_max,
                                                  const MinSeparatorOptions& options) {
  require_pair(dag, pair);
  if (dag.adjacent(pair.i, pair.j)) return std::nullopt;

  const std::size_t n = dag.size();
  const std::size_t universe = n - 2;
  const std::size_t top = std::min(s_max, universe);
  double work = 0.0;
  for (std::size_t s = 0; s <= top; ++s) work += binomial(universe, s);
  if (work > options.budget)
    throw DomainError("s_max", "subset count " + std::to_string(static_cast<long double>(work)) +
                                   " exceeds budget " + std::to_string(options.budget));

  NodeSet forced(n);
  std::vector<Node> pool;
  if (options.prune) {
    NodeSet ends(n, {pair.i, pair.j});
    NodeSet candidates = ancestral_closure(dag, ends) - ends;
    forced = length_two_middles(dag, pair).noncollider;
    pool = (candidates - forced).members();
  } else {
    pool = complement_of_pair(n, pair);
  }

  SeparationChecker checker(dag);
  const std::size_t base = forced.size();
  std::optional<ConditioningSet> found;
  for (std::size_t s = base; s <= top && !found; ++s) {
    for_each_combination(pool, s - base, [&](std::span<const Node> chosen) {
      ConditioningSet z = forced;
      for (Node v : chosen) z.insert(v);
      if (checker.separated(pair, z)) {
        found = std::move(z);
        return true;
      }
      return false;
    });
  }
  return found;
}

std::optional<std::size_t> min_separator_size(const Dag& dag, NodePair pair, std::size_t s_max,
                                              const MinSeparatorOptions& options) {
  auto z = find_min_separator(dag, pair, s_max, options);
  if (!z) return std::nullopt;
  return z->size();
}

std::uint64_t count_nonseparating_sets(const Dag& dag, NodePair pair, std::size_t max_nodes) {
  if (dag.size() > max_nodes)
    throw DomainError("n", "full enumeration limited to " + std::to_string(max_nodes) + " nodes");
  require_pair(dag, pair);
  const auto pool = complement_of_pair(dag.size(), pair);
  const std::uint64_t total = std::uint64_t{1} << pool.size();
  if (dag.adjacent(pair.i, pair.j)) return total;

  SeparationChecker checker(dag);
  std::uint64_t failing = 0;
  ConditioningSet z(dag.size());
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    z.clear();
    for (std::size_t b = 0; b < pool.size(); ++b)
      if ((mask >> b) & 1U) z.insert(pool[b]);
    if (!checker.separated(pair, z)) ++failing;
  }
  return failing;
}

}  // namespace dsep
