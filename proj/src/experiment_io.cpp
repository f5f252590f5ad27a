#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dsep/error.hpp"
#include "dsep/experiments.hpp"

namespace dsep::experiments {

namespace {

using nlohmann::json;

constexpr std::pair<Scenario, std::string_view> kScenarioNames[] = {
    {Scenario::kFig1RandomZ, "fig1_random_z"},
    {Scenario::kPerfectPc, "perfect_pc"},
    {Scenario::kBoundRandomZ, "bound_random_z"},
    {Scenario::kBoundBoundedSize, "bound_bounded_size"},
    {Scenario::kBoundFixedSize, "bound_fixed_size"},
    {Scenario::kSgsCalls, "sgs_calls"},
    {Scenario::kSparsityCurve, "sparsity_curve"},
};

const std::set<std::string> kKnownKeys = {
    "scenario",        "n_values",        "p1",          "p2_values",      "alpha_values",
    "c_max_values",    "pairs_per_graph", "sets_per_pair", "graphs_per_point", "root_seed",
    "output_path",     "pair_i",          "pair_j",      "p1_coefficient",
};

template <class T>
T read_field(const json& obj, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw DomainError(key, "missing or has the wrong type");
  }
}

template <class T>
void read_optional(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = read_field<T>(obj, key);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed: " + path);
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
std::string opt(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

std::string_view to_string(Scenario scenario) {
  for (auto [s, name] : kScenarioNames)
    if (s == scenario) return name;
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (auto [s, known] : kScenarioNames)
    if (known == name) return s;
  throw DomainError("scenario", "unknown scenario '" + std::string(name) + "'");
}

std::string config_to_json(const ExperimentConfig& c) {
  json obj;
  obj["scenario"] = std::string(to_string(c.scenario));
  obj["n_values"] = c.n_values;
  obj["p1"] = c.p1;
  obj["p2_values"] = c.p2_values;
  obj["alpha_values"] = c.alpha_values;
  obj["c_max_values"] = c.c_max_values;
  obj["pairs_per_graph"] = c.pairs_per_graph;
  obj["sets_per_pair"] = c.sets_per_pair;
  obj["graphs_per_point"] = c.graphs_per_point;
  obj["root_seed"] = c.root_seed;
  obj["output_path"] = c.output_path;
  if (c.pair_i) obj["pair_i"] = *c.pair_i;
  if (c.pair_j) obj["pair_j"] = *c.pair_j;
  if (c.p1_coefficient) obj["p1_coefficient"] = *c.p1_coefficient;
  return obj.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  if (!obj.is_object()) throw FormatError("config: expected a JSON object");
  for (const auto& item : obj.items())
    if (!kKnownKeys.contains(item.key())) throw DomainError(item.key(), "unknown config key");

  ExperimentConfig c;
  c.scenario = parse_scenario(read_field<std::string>(obj, "scenario"));
  c.n_values = read_field<std::vector<std::size_t>>(obj, "n_values");
  c.root_seed = read_field<std::uint64_t>(obj, "root_seed");
  read_optional(obj, "p1", c.p1);
  read_optional(obj, "p2_values", c.p2_values);
  read_optional(obj, "alpha_values", c.alpha_values);
  read_optional(obj, "c_max_values", c.c_max_values);
  read_optional(obj, "pairs_per_graph", c.pairs_per_graph);
  read_optional(obj, "sets_per_pair", c.sets_per_pair);
  read_optional(obj, "graphs_per_point", c.graphs_per_point);
  read_optional(obj, "output_path", c.output_path);
  if (obj.contains("pair_i")) c.pair_i = read_field<Node>(obj, "pair_i");
  if (obj.contains("pair_j")) c.pair_j = read_field<Node>(obj, "pair_j");
  if (obj.contains("p1_coefficient")) c.p1_coefficient = read_field<double>(obj, "p1_coefficient");
  validate(c);
  return c;
}

void write_config(const ExperimentConfig& config, const std::string& path) {
  write_text(path, config_to_json(config));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string format_csv(std::span<const TrialRecord> records) {
  std::string out(kTrialHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.scenario + ',' + std::to_string(r.n) + ',' + format_double(r.p1) + ',' + opt(r.p2) +
           ',' + opt(r.alpha) + ',' + opt(r.c_max) + ',' + std::to_string(r.graph_seed) + ',' +
           std::to_string(r.i) + ',' + std::to_string(r.j) + ',' + r.stat_name + ',' +
           format_double(r.stat_value) + ',' + opt(r.bound_value) + '\n';
  }
  return out;
}

std::string format_csv(std::span<const SummaryRecord> records) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.scenario + ',' + std::to_string(r.n) + ',' + format_double(r.p1) + ',' +
           r.param_name + ',' + opt(r.param_value) + ',' + r.stat_name + ',' +
           format_double(r.value) + ',' + opt(r.std_error) + ',' + std::to_string(r.sample_count) +
           ',' + opt(r.bound_value) + '\n';
  }
  return out;
}

void write_csv(std::span<const TrialRecord> records, const std::string& path) {
  write_text(path, format_csv(records));
}

void write_csv(std::span<const SummaryRecord> records, const std::string& path) {
  write_text(path, format_csv(records));
}

std::string trials_path_for(const std::string& summary_path) {
  const auto slash = summary_path.find_last_of('/');
  const auto dot = summary_path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? summary_path.substr(0, dot) : summary_path) + ".trials.csv";
}

void write_result(const ExperimentResult& result, const std::string& summary_path) {
  write_csv(result.summaries, summary_path);
  write_csv(result.trials, trials_path_for(summary_path));
}

}  // namespace dsep::experiments
