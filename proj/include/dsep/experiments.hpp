#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsep/dag.hpp"

// Monte Carlo scenario runners. Every trial is a pure function of a seed
// derived as split_seed(root_seed, point, trial); results are reduced in
// (point, trial) order so output does not depend on scheduling.
namespace dsep::experiments {

enum class Scenario {
  kFig1RandomZ,
  kPerfectPc,
  kBoundRandomZ,
  kBoundBoundedSize,
  kBoundFixedSize,
  kSgsCalls,
  kSparsityCurve,
};

std::string_view to_string(Scenario scenario);
// Throws DomainError naming the value when unknown.
Scenario parse_scenario(std::string_view name);

struct ExperimentConfig {
  Scenario scenario = Scenario::kFig1RandomZ;
  std::vector<std::size_t> n_values;
  double p1 = 0.05;
  std::vector<double> p2_values;
  std::vector<std::size_t> alpha_values;
  std::vector<std::size_t> c_max_values;
  std::size_t pairs_per_graph = 100;
  std::size_t sets_per_pair = 1000;
  std::size_t graphs_per_point = 1;
  std::uint64_t root_seed = 0;
  std::string output_path;
  // Fixed pair for the bound_* and sgs_calls scenarios, 0-based.
  // Defaults: pair_i = 0, pair_j = n - 1.
  std::optional<Node> pair_i;
  std::optional<Node> pair_j;
  // sparsity_curve only: when set, each point uses p1 = p1_coefficient / n.
  std::optional<double> p1_coefficient;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Throws DomainError on the first missing or out-of-range field.
void validate(const ExperimentConfig& config);

// Representative parameters for each scenario (desk-scale sizes).
ExperimentConfig default_config(Scenario scenario);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text);
void write_config(const ExperimentConfig& config, const std::string& path);
ExperimentConfig load_config(const std::string& path);

struct TrialRecord {
  std::string scenario;
  std::size_t n = 0;
  double p1 = 0.0;
  std::optional<double> p2;
  std::optional<std::size_t> alpha;
  std::optional<std::size_t> c_max;
  std::uint64_t graph_seed = 0;
  Node i = 0;
  Node j = 0;
  std::string stat_name;
  double stat_value = 0.0;
  std::optional<double> bound_value;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct SummaryRecord {
  std::string scenario;
  std::size_t n = 0;
  double p1 = 0.0;
  std::string param_name;
  std::optional<double> param_value;
  std::string stat_name;
  double value = 0.0;
  std::optional<double> std_error;  // absent for maxima
  std::size_t sample_count = 0;
  std::optional<double> bound_value;

  friend bool operator==(const SummaryRecord&, const SummaryRecord&) = default;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;
  std::vector<SummaryRecord> summaries;
};

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

ExperimentResult run_fig1(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentResult run_perfect_pc(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentResult run_bound_validation(const ExperimentConfig& config,
                                      const RunOptions& options = {});
ExperimentResult run_sgs_calls(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentResult run_sparsity_curve(const ExperimentConfig& config,
                                    const RunOptions& options = {});
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

inline constexpr std::size_t kSgsMaxNodes = 16;

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

inline constexpr std::string_view kTrialHeader =
    "scenario,n,p1,p2,alpha,c_max,graph_seed,i,j,stat_name,stat_value,bound_value";
inline constexpr std::string_view kSummaryHeader =
    "scenario,n,p1,param_name,param_value,stat_name,value,stderr,sample_count,bound_value";

std::string format_csv(std::span<const TrialRecord> records);
std::string format_csv(std::span<const SummaryRecord> records);
void write_csv(std::span<const TrialRecord> records, const std::string& path);
void write_csv(std::span<const SummaryRecord> records, const std::string& path);

// Summary CSV at `summary_path`, trials next to it as <stem>.trials.csv.
std::string trials_path_for(const std::string& summary_path);
void write_result(const ExperimentResult& result, const std::string& summary_path);

}  // namespace dsep::experiments
