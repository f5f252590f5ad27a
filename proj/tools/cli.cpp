#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dsep/bounds.hpp"
#include "dsep/dag.hpp"
#include "dsep/discovery.hpp"
#include "dsep/error.hpp"
#include "dsep/experiments.hpp"
#include "dsep/separation.hpp"

namespace {

using nlohmann::json;
using namespace dsep;

struct QueryArgs {
  std::string graph;
  Node x = -1;
  Node y = -1;
  std::vector<Node> z;
};

void add_query_flags(CLI::App* cmd, QueryArgs& q, bool with_z) {
  cmd->add_option("--graph", q.graph, "DAG text file")->required();
  cmd->add_option("--x", q.x, "first node (0-based)")->required();
  cmd->add_option("--y", q.y, "second node (0-based)")->required();
  if (with_z) cmd->add_option("--z", q.z, "conditioning nodes")->delimiter(',');
}

struct Query {
  Dag dag;
  NodePair pair;
  ConditioningSet z;
};

Query load_query(const QueryArgs& q) {
  Dag dag = read_dag_file(q.graph);
  dag.check_node(q.x, "x");
  dag.check_node(q.y, "y");
  if (q.x == q.y) throw DomainError("y", "must differ from x");
  ConditioningSet z(dag.size());
  for (Node v : q.z) {
    dag.check_node(v, "z");
    if (v == q.x || v == q.y) throw DomainError("z", "must not contain x or y");
    z.insert(v);
  }
  const NodePair pair = NodePair::of(q.x, q.y);
  return {std::move(dag), pair, std::move(z)};
}

json node_list(const NodeSet& s) {
  json a = json::array();
  for (Node v : s.members()) a.push_back(v);
  return a;
}

json skeleton_json(const SkeletonResult& r) {
  json edges = json::array();
  for (auto p : r.e_pred) edges.push_back({p.i, p.j});
  json seps = json::object();
  for (const auto& [p, z] : r.separators)
    seps[std::to_string(p.i) + "," + std::to_string(p.j)] = node_list(z);
  json calls = json::object();
  for (const auto& [p, c] : r.stats.per_pair_calls)
    calls[std::to_string(p.i) + "," + std::to_string(p.j)] = c;
  return {{"e_pred", edges},
          {"separators", seps},
          {"per_pair_calls", calls},
          {"total_calls", r.stats.total_calls}};
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + out_path);
  f << payload;
  if (!f) throw FormatError("write failed: " + out_path);
}

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::string(buf) + "\n";
}

template <class T>
T need(const std::optional<T>& v, const char* field) {
  if (!v) throw DomainError(field, "required for this bound");
  return *v;
}

std::string summaries_json(const experiments::ExperimentResult& r) {
  json a = json::array();
  for (const auto& s : r.summaries) {
    json row = {{"scenario", s.scenario},     {"n", s.n},
                {"p1", s.p1},                 {"param_name", s.param_name},
                {"stat_name", s.stat_name},   {"value", s.value},
                {"sample_count", s.sample_count}};
    row["param_value"] = s.param_value ? json(*s.param_value) : json(nullptr);
    row["stderr"] = s.std_error ? json(*s.std_error) : json(nullptr);
    row["bound_value"] = s.bound_value ? json(*s.bound_value) : json(nullptr);
    a.push_back(row);
  }
  return a.dump(2) + "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Random-DAG d-separation toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string out_path;
  std::optional<std::uint64_t> seed;

  // gen
  auto* gen = app.add_subcommand("gen", "sample a random DAG");
  std::size_t gen_n = 0;
  double gen_p1 = 0;
  gen->add_option("--n", gen_n)->required();
  gen->add_option("--p1", gen_p1)->required();
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path);

  // dsep / pseudosep / census / minsep
  QueryArgs dq, pq, cq, mq;
  auto* dsep_cmd = app.add_subcommand("dsep", "d-separation query");
  add_query_flags(dsep_cmd, dq, true);
  dsep_cmd->add_option("--out", out_path);
  auto* pseudo_cmd = app.add_subcommand("pseudosep", "length-2 pseudoseparation query");
  add_query_flags(pseudo_cmd, pq, true);
  pseudo_cmd->add_option("--out", out_path);
  auto* census_cmd = app.add_subcommand("census", "length-2 path census for a pair");
  add_query_flags(census_cmd, cq, true);
  census_cmd->add_option("--out", out_path);
  auto* minsep_cmd = app.add_subcommand("minsep", "smallest separating set");
  add_query_flags(minsep_cmd, mq, false);
  std::optional<std::size_t> s_max;
  minsep_cmd->add_option("--s-max", s_max, "largest size searched (default n-2)");
  minsep_cmd->add_option("--out", out_path);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate a closed-form bound");
  std::string which;
  std::size_t b_n = 0;
  std::optional<std::size_t> b_j, b_alpha;
  std::optional<double> b_p1, b_p2, b_delta1, b_delta2, b_d;
  bounds_cmd
      ->add_option("--which", which)
      ->required()
      ->check(CLI::IsMember({"random_z", "random_z_simple", "random_z_unconditional",
                             "bounded_size", "bounded_size_threshold",
                             "bounded_size_unconditional", "fixed_size", "sparse_ratio",
                             "pc_cmax_threshold", "pc_adjacency_threshold", "sgs_conditional",
                             "sgs_unconditional"}));
  bounds_cmd->add_option("--n", b_n)->required();
  bounds_cmd->add_option("--j", b_j, "1-based position of the later node");
  bounds_cmd->add_option("--p1", b_p1);
  bounds_cmd->add_option("--p2", b_p2);
  bounds_cmd->add_option("--alpha", b_alpha);
  bounds_cmd->add_option("--delta1", b_delta1);
  bounds_cmd->add_option("--delta2", b_delta2);
  bounds_cmd->add_option("--d", b_d, "density for sparse_ratio");
  bounds_cmd->add_option("--out", out_path);

  // pc
  auto* pc_cmd = app.add_subcommand("pc", "PC skeleton against the perfect oracle");
  std::string pc_graph;
  std::optional<std::size_t> c_max;
  bool full_powerset = false;
  pc_cmd->add_option("--graph", pc_graph)->required();
  pc_cmd->add_option("--c-max", c_max, "largest conditioning set (default unbounded)");
  pc_cmd->add_flag("--full-powerset", full_powerset);
  pc_cmd->add_option("--out", out_path);

  // sgs
  auto* sgs_cmd = app.add_subcommand("sgs", "UniformSGS skeleton against the perfect oracle");
  std::string sgs_graph;
  std::uint64_t call_cap = kDefaultSgsCallCap;
  bool uncapped = false;
  sgs_cmd->add_option("--graph", sgs_graph)->required();
  sgs_cmd->add_option("--seed", seed);
  sgs_cmd->add_option("--call-cap", call_cap, "per-pair oracle call cap");
  sgs_cmd->add_flag("--uncapped", uncapped);
  sgs_cmd->add_option("--out", out_path);

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a Monte Carlo scenario");
  std::string config_path;
  unsigned threads = 0;
  std::string format = "csv";
  std::string init_scenario;
  auto* config_opt = exp_cmd->add_option("--config", config_path, "JSON config to run");
  auto* init_opt = exp_cmd->add_option("--init", init_scenario, "print a scenario's default config and exit");
  config_opt->excludes(init_opt);
  exp_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  exp_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  exp_cmd->add_option("--out", out_path, "summary path; trials go next to it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "error: args: " << msg << "\n";
    return 1;
  }

  try {
    if (gen->parsed()) {
      if (!seed) throw DomainError("seed", "required");
      const Dag dag = generate_random_dag({gen_n, gen_p1, *seed});
      emit(write_dag_text(dag), out_path);
    } else if (dsep_cmd->parsed()) {
      const auto q = load_query(dq);
      emit(is_d_separated(q.dag, q.pair, q.z) ? "separated\n" : "not separated\n", out_path);
    } else if (pseudo_cmd->parsed()) {
      const auto q = load_query(pq);
      emit(is_pseudoseparated(q.dag, q.pair, q.z) ? "pseudoseparated\n" : "not pseudoseparated\n",
           out_path);
    } else if (census_cmd->parsed()) {
      const auto q = load_query(cq);
      const auto c = path_census(q.dag, q.pair);
      const auto m = violation_count(q.dag.size(), q.pair, q.z);
      json j = {{"b_nc", c.b_nc},
                {"b_c", c.b_c},
                {"q_nc_capacity", c.q_nc_capacity},
                {"q_c_capacity", c.q_c_capacity},
                {"m_nc", m.m_nc},
                {"m_c", m.m_c}};
      emit(j.dump() + "\n", out_path);
    } else if (minsep_cmd->parsed()) {
      const auto q = load_query(mq);
      const std::size_t limit = s_max.value_or(q.dag.size() - 2);
      if (limit > q.dag.size() - 2) throw DomainError("s_max", "must not exceed n-2");
      const auto sep = find_min_separator(q.dag, q.pair, limit);
      json j = {{"pair", {q.pair.i, q.pair.j}}};
      j["separator"] = sep ? node_list(*sep) : json(nullptr);
      j["size"] = sep ? json(sep->size()) : json(nullptr);
      emit(j.dump() + "\n", out_path);
    } else if (bounds_cmd->parsed()) {
      double value = 0;
      if (which == "sparse_ratio") {
        value = bounds::sparse_graph_ratio(b_n, need(b_d, "d"));
      } else if (which == "sgs_conditional" || which == "sgs_unconditional") {
        const auto lb = bounds::sgs_calls_lower_bound({b_n, need(b_p1, "p1")});
        value = which == "sgs_conditional" ? lb.conditional : lb.unconditional;
      } else if (which == "pc_cmax_threshold") {
        value = bounds::pc_cmax_threshold(b_n, need(b_p1, "p1"), need(b_delta1, "delta1"));
      } else if (which == "pc_adjacency_threshold") {
        value = bounds::pc_adjacency_threshold(b_n, need(b_p1, "p1"), need(b_delta2, "delta2"));
      } else {
        bounds::BoundInput in;
        in.n = b_n;
        in.p1 = need(b_p1, "p1");
        in.j = need(b_j, "j");
        in.p2 = b_p2;
        in.alpha = b_alpha;
        if (which == "random_z") value = bounds::random_z(in);
        else if (which == "random_z_simple") value = bounds::random_z_simple(in);
        else if (which == "random_z_unconditional") value = bounds::random_z_unconditional(in);
        else if (which == "bounded_size") value = bounds::bounded_size(in).probability;
        else if (which == "bounded_size_threshold") value = bounds::bounded_size(in).threshold;
        else if (which == "bounded_size_unconditional") value = bounds::bounded_size_unconditional(in);
        else value = bounds::fixed_size(in);
      }
      emit(g12(value), out_path);
    } else if (pc_cmd->parsed()) {
      const Dag dag = read_dag_file(pc_graph);
      PcConfig cfg;
      cfg.c_max = c_max;
      cfg.full_powerset = full_powerset;
      emit(skeleton_json(pc_skeleton(dag, cfg)).dump() + "\n", out_path);
    } else if (sgs_cmd->parsed()) {
      if (!seed) throw DomainError("seed", "required");
      const Dag dag = read_dag_file(sgs_graph);
      SgsConfig cfg;
      cfg.seed = *seed;
      cfg.call_cap = uncapped ? std::nullopt : std::optional<std::uint64_t>(call_cap);
      if (!uncapped && call_cap == 0) throw DomainError("call_cap", "must be at least 1");
      emit(skeleton_json(uniform_sgs_skeleton(dag, cfg)).dump() + "\n", out_path);
    } else if (exp_cmd->parsed() && !init_scenario.empty()) {
      emit(experiments::config_to_json(experiments::default_config(experiments::parse_scenario(init_scenario))),
           out_path);
    } else if (exp_cmd->parsed()) {
      if (config_path.empty()) throw DomainError("config", "one of --config or --init is required");
      auto config = experiments::load_config(config_path);
      if (!out_path.empty()) config.output_path = out_path;
      const auto result = experiments::run_experiment(config, {threads});
      if (config.output_path.empty()) {
        std::cout << (format == "json" ? summaries_json(result)
                                       : experiments::format_csv(result.summaries));
      } else if (format == "json") {
        emit(summaries_json(result), config.output_path);
        experiments::write_csv(result.trials, experiments::trials_path_for(config.output_path));
      } else {
        experiments::write_result(result, config.output_path);
      }
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const FormatError& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
