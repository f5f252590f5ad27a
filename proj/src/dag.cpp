#include "dsep/dag.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dsep/error.hpp"
#include "dsep/rng.hpp"

namespace dsep {

NodePair NodePair::of(Node a, Node b) {
  if (a == b) throw DomainError("pair", "endpoints must differ");
  return a < b ? NodePair{a, b} : NodePair{b, a};
}

Dag::Dag(std::size_t n) : children_(n, NodeSet(n)), parents_(n, NodeSet(n)) {}

void Dag::add_edge(Node u, Node v) {
  children_[u].insert(v);
  parents_[v].insert(u);
  ++edge_count_;
}

void Dag::check_node(Node v, const char* field) const {
  if (v < 0 || static_cast<std::size_t>(v) >= size())
    throw DomainError(field, "node " + std::to_string(v) + " out of range for n=" +
                                 std::to_string(size()));
}

Dag Dag::from_edges(std::size_t n, std::span<const std::pair<Node, Node>> edges) {
  if (n == 0) throw DomainError("n", "must be at least 1");
  Dag dag(n);
  for (auto [u, v] : edges) {
    dag.check_node(u, "edge");
    dag.check_node(v, "edge");
    if (u >= v)
      throw DomainError("edge", std::to_string(u) + " " + std::to_string(v) +
                                    " does not respect the topological order");
    if (dag.has_edge(u, v))
      throw DomainError("edge",
                        "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    dag.add_edge(u, v);
  }
  return dag;
}

Dag Dag::empty(std::size_t n) { return from_edges(n, {}); }

Dag Dag::complete(std::size_t n) {
  if (n == 0) throw DomainError("n", "must be at least 1");
  Dag dag(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) dag.add_edge(static_cast<Node>(u), static_cast<Node>(v));
  return dag;
}

std::vector<std::pair<Node, Node>> Dag::edges() const {
  std::vector<std::pair<Node, Node>> out;
  out.reserve(edge_count_);
  for (std::size_t u = 0; u < size(); ++u)
    children_[u].for_each([&](Node v) { out.emplace_back(static_cast<Node>(u), v); });
  return out;
}

Dag generate_random_dag(const GenParams& params, std::optional<EdgeConstraint> constraint) {
  if (params.n == 0) throw DomainError("n", "must be at least 1");
  if (!(params.p1 > 0.0 && params.p1 < 1.0)) throw DomainError("p1", "must lie in (0,1)");
  if (constraint) {
    const auto n = static_cast<Node>(params.n);
    if (constraint->pair.i < 0 || constraint->pair.j >= n || constraint->pair.i >= constraint->pair.j)
      throw DomainError("pair", "constrained pair out of range");
  }

  Rng rng(params.seed);
  std::vector<std::pair<Node, Node>> edges;
  for (std::size_t u = 0; u < params.n; ++u) {
    for (std::size_t v = u + 1; v < params.n; ++v) {
      bool present = rng.bernoulli(params.p1);
      const auto uu = static_cast<Node>(u);
      const auto vv = static_cast<Node>(v);
      if (constraint && constraint->pair.i == uu && constraint->pair.j == vv)
        present = constraint->present;
      if (present) edges.emplace_back(uu, vv);
    }
  }
  return Dag::from_edges(params.n, edges);
}

NodeSet descendants(const Dag& dag, Node v) {
  dag.check_node(v, "node");
  NodeSet out(dag.size());
  // Topological order is the index order, so one forward sweep closes the set.
  out |= dag.children(v);
  for (std::size_t u = static_cast<std::size_t>(v) + 1; u < dag.size(); ++u)
    if (out.contains(static_cast<Node>(u))) out |= dag.children(static_cast<Node>(u));
  return out;
}

NodeSet ancestral_closure(const Dag& dag, const NodeSet& seeds) {
  NodeSet out = seeds;
  for (std::size_t k = dag.size(); k-- > 0;)
    if (out.contains(static_cast<Node>(k))) out |= dag.parents(static_cast<Node>(k));
  return out;
}

std::vector<NodePair> nonadjacent_pairs(const Dag& dag) {
  std::vector<NodePair> out;
  const auto n = static_cast<Node>(dag.size());
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j)
      if (!dag.has_edge(i, j)) out.push_back({i, j});
  return out;
}

std::vector<NodePair> sample_pairs(std::span<const NodePair> pairs, std::size_t count,
                                   std::uint64_t seed) {
  if (count > pairs.size())
    throw DomainError("count", "requested " + std::to_string(count) + " pairs but only " +
                                   std::to_string(pairs.size()) + " available");
  std::vector<NodePair> pool(pairs.begin(), pairs.end());
  Rng rng(seed);
  for (std::size_t t = 0; t < count; ++t) {
    const auto r = t + rng.below(pool.size() - t);
    std::swap(pool[t], pool[r]);
  }
  pool.resize(count);
  return pool;
}

double density(const Dag& dag) {
  const auto n = dag.size();
  if (n < 2) throw DomainError("n", "density needs at least 2 nodes");
  return static_cast<double>(dag.edge_count()) / (static_cast<double>(n) * (n - 1) / 2.0);
}

std::string write_dag_text(const Dag& dag) {
  std::string out = "dag " + std::to_string(dag.size()) + "\n";
  for (auto [u, v] : dag.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

namespace {

// Splits a line into exactly `count` non-negative integers separated by single spaces.
bool parse_ints(std::string_view line, std::span<long long> out) {
  const char* p = line.data();
  const char* end = line.data() + line.size();
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k > 0) {
      if (p == end || *p != ' ') return false;
      ++p;
    }
    if (p == end || *p < '0' || *p > '9') return false;
    auto [next, ec] = std::from_chars(p, end, out[k]);
    if (ec != std::errc()) return false;
    p = next;
  }
  return p == end;
}

}  // namespace

Dag parse_dag_text(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) throw FormatError("dag: missing final newline");
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw FormatError("dag: empty input");

  const auto header = lines.front();
  long long n = 0;
  if (header.substr(0, 4) != "dag " || !parse_ints(header.substr(4), std::span(&n, 1)) || n < 1)
    throw FormatError("dag: bad header line '" + std::string(header) + "'");

  std::vector<std::pair<Node, Node>> edges;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    long long uv[2] = {0, 0};
    if (!parse_ints(lines[k], uv))
      throw FormatError("dag: line " + std::to_string(k + 1) + ": expected '<u> <v>'");
    if (uv[0] >= n || uv[1] >= n)
      throw FormatError("dag: line " + std::to_string(k + 1) + ": node out of range");
    if (uv[0] >= uv[1])
      throw FormatError("dag: line " + std::to_string(k + 1) + ": requires u < v");
    std::pair<Node, Node> e{static_cast<Node>(uv[0]), static_cast<Node>(uv[1])};
    if (!edges.empty()) {
      if (e == edges.back())
        throw FormatError("dag: line " + std::to_string(k + 1) + ": duplicate edge");
      if (e < edges.back())
        throw FormatError("dag: line " + std::to_string(k + 1) + ": edges not sorted");
    }
    edges.push_back(e);
  }
  return Dag::from_edges(static_cast<std::size_t>(n), edges);
}

Dag read_dag_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dag_text(buf.str());
}

void write_dag_file(const Dag& dag, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << write_dag_text(dag);
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace dsep
