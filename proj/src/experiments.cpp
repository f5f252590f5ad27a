#include "dsep/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "dsep/bounds.hpp"
#include "dsep/discovery.hpp"
#include "dsep/error.hpp"
#include "dsep/rng.hpp"
#include "dsep/separation.hpp"
#include "parallel.hpp"

namespace dsep::experiments {

namespace {

// Sub-stream tags under a graph seed.
constexpr std::uint64_t kPairSampleTag = 1;
constexpr std::uint64_t kSetTag = 2;
constexpr std::uint64_t kSgsTag = 3;

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean and sqrt(population variance / m); for 0/1 samples this is sqrt(p(1-p)/m).
MeanEstimate estimate_mean(std::span<const double> xs) {
  MeanEstimate out;
  if (xs.empty()) return out;
  const double m = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / m;
  double sq = 0.0;
  for (double x : xs) sq += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(sq / m / m);
  return out;
}

void require_probability(double p, const char* field) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(field, "must lie in (0,1)");
}

NodePair fixed_pair(const ExperimentConfig& c, std::size_t n) {
  const Node i = c.pair_i.value_or(0);
  const Node j = c.pair_j.value_or(static_cast<Node>(n) - 1);
  if (i < 0 || i >= j || static_cast<std::size_t>(j) >= n)
    throw DomainError("pair_j", "pair (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") invalid for n=" + std::to_string(n));
  return {i, j};
}

bounds::BoundInput bound_input(std::size_t n, double p1, NodePair pair) {
  bounds::BoundInput in;
  in.n = n;
  in.p1 = p1;
  in.j = static_cast<std::size_t>(pair.j) + 1;
  return in;
}

TrialRecord trial(const ExperimentConfig& c, std::size_t n, double p1, std::uint64_t seed,
                  NodePair pair, std::string stat, double value) {
  TrialRecord r;
  r.scenario = std::string(to_string(c.scenario));
  r.n = n;
  r.p1 = p1;
  r.graph_seed = seed;
  r.i = pair.i;
  r.j = pair.j;
  r.stat_name = std::move(stat);
  r.stat_value = value;
  return r;
}

SummaryRecord summary(const ExperimentConfig& c, std::size_t n, double p1, std::string param_name,
                      std::optional<double> param_value, std::string stat, double value,
                      std::optional<double> std_error, std::size_t count,
                      std::optional<double> bound) {
  return {std::string(to_string(c.scenario)), n, p1, std::move(param_name), param_value,
          std::move(stat), value, std_error, count, bound};
}

// Samples up to `wanted` nonadjacent pairs. A shortfall is reported through
// an `available_pairs` trial record.
std::vector<NodePair> pick_pairs(const ExperimentConfig& c, const Dag& dag, std::uint64_t seed,
                                 double p1, std::vector<TrialRecord>& trials) {
  const auto pool = nonadjacent_pairs(dag);
  const std::size_t count = std::min(c.pairs_per_graph, pool.size());
  if (count < c.pairs_per_graph)
    trials.push_back(trial(c, dag.size(), p1, seed, {0, 0}, "available_pairs",
                           static_cast<double>(pool.size())));
  return sample_pairs(pool, count, split_seed(seed, kPairSampleTag));
}

std::vector<std::vector<TrialRecord>> run_tasks(
    std::size_t count, const RunOptions& options,
    const std::function<std::vector<TrialRecord>(std::size_t)>& task) {
  std::vector<std::vector<TrialRecord>> out(count);
  detail::parallel_for(count, options.threads, [&](std::size_t k) { out[k] = task(k); });
  return out;
}

void append(std::vector<TrialRecord>& dst, std::vector<TrialRecord>& src) {
  dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

std::vector<double> values_of(const std::vector<TrialRecord>& trials, std::string_view stat,
                              std::optional<double> p2 = std::nullopt,
                              std::optional<std::size_t> c_max = std::nullopt) {
  std::vector<double> out;
  for (const auto& t : trials)
    if (t.stat_name == stat && (!p2 || t.p2 == p2) && (!c_max || t.c_max == c_max))
      out.push_back(t.stat_value);
  return out;
}

void require_scenario(const ExperimentConfig& c, std::initializer_list<Scenario> allowed) {
  if (std::find(allowed.begin(), allowed.end(), c.scenario) == allowed.end())
    throw DomainError("scenario", "runner does not handle '" + std::string(to_string(c.scenario)) + "'");
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.n_values.empty()) throw DomainError("n_values", "must not be empty");
  for (auto n : c.n_values)
    if (n < 2) throw DomainError("n_values", "every n must be at least 2");
  if (c.graphs_per_point == 0) throw DomainError("graphs_per_point", "must be at least 1");

  if (c.scenario == Scenario::kSparsityCurve && c.p1_coefficient) {
    for (auto n : c.n_values) {
      const double p = *c.p1_coefficient / static_cast<double>(n);
      if (!(p > 0.0 && p < 1.0))
        throw DomainError("p1_coefficient", "p1_coefficient/n must lie in (0,1) for n=" + std::to_string(n));
    }
  } else {
    require_probability(c.p1, "p1");
    if (c.p1_coefficient) throw DomainError("p1_coefficient", "only valid for sparsity_curve");
  }
  for (double p2 : c.p2_values) require_probability(p2, "p2_values");

  switch (c.scenario) {
    case Scenario::kFig1RandomZ:
      if (c.p2_values.empty()) throw DomainError("p2_values", "required for fig1_random_z");
      [[fallthrough]];
    case Scenario::kPerfectPc:
      if (c.pairs_per_graph == 0) throw DomainError("pairs_per_graph", "must be at least 1");
      if (c.scenario == Scenario::kFig1RandomZ && c.sets_per_pair == 0)
        throw DomainError("sets_per_pair", "must be at least 1");
      if (c.scenario == Scenario::kPerfectPc && c.c_max_values.empty())
        throw DomainError("c_max_values", "required for perfect_pc");
      break;
    case Scenario::kBoundRandomZ:
    case Scenario::kBoundFixedSize:
    case Scenario::kBoundBoundedSize:
    case Scenario::kSgsCalls:
      for (auto n : c.n_values) fixed_pair(c, n);
      if (c.scenario == Scenario::kBoundRandomZ && c.p2_values.empty())
        throw DomainError("p2_values", "required for bound_random_z");
      if (c.scenario == Scenario::kBoundFixedSize) {
        if (c.alpha_values.empty()) throw DomainError("alpha_values", "required for bound_fixed_size");
        for (auto n : c.n_values)
          for (auto a : c.alpha_values)
            if (a > n - 2) throw DomainError("alpha_values", "alpha must not exceed n-2");
      }
      if ((c.scenario == Scenario::kBoundRandomZ || c.scenario == Scenario::kBoundFixedSize) &&
          c.sets_per_pair == 0)
        throw DomainError("sets_per_pair", "must be at least 1");
      if (c.scenario == Scenario::kSgsCalls)
        for (auto n : c.n_values)
          if (n < 3 || n > kSgsMaxNodes)
            throw DomainError("n_values", "sgs_calls runs uncapped and needs 3 <= n <= 16");
      break;
    case Scenario::kSparsityCurve:
      break;
  }
}

ExperimentConfig default_config(Scenario scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.root_seed = 20240601;
  c.output_path = std::string(to_string(scenario)) + ".csv";
  switch (scenario) {
    case Scenario::kFig1RandomZ:
      c.n_values = {50, 100, 150, 200, 250, 300};
      c.p1 = 0.05;
      c.p2_values = {0.1, 0.3, 0.5};
      break;
    case Scenario::kPerfectPc:
      for (std::size_t n = 25; n <= 300; n += 25) c.n_values.push_back(n);
      c.p1 = 0.05;
      c.c_max_values = {2, 3};
      c.pairs_per_graph = 30;
      break;
    case Scenario::kBoundRandomZ:
      c.n_values = {30};
      c.p1 = 0.4;
      c.p2_values = {0.3, 0.5, 0.7};
      c.sets_per_pair = 1;
      c.graphs_per_point = 20000;
      c.pair_j = 19;
      break;
    case Scenario::kBoundBoundedSize:
      c.n_values = {20};
      c.p1 = 0.9;
      c.graphs_per_point = 5000;
      c.pair_j = 19;
      break;
    case Scenario::kBoundFixedSize:
      c.n_values = {30};
      c.p1 = 0.4;
      c.alpha_values = {0, 5, 14};
      c.sets_per_pair = 1;
      c.graphs_per_point = 20000;
      c.pair_j = 19;
      break;
    case Scenario::kSgsCalls:
      c.n_values = {6, 8, 10, 12};
      c.p1 = 0.5;
      c.graphs_per_point = 5000;
      break;
    case Scenario::kSparsityCurve:
      c.n_values = {10, 20, 30, 40};
      c.p1_coefficient = 2.0;
      c.graphs_per_point = 200;
      break;
  }
  return c;
}

ExperimentResult run_fig1(const ExperimentConfig& c, const RunOptions& options) {
  require_scenario(c, {Scenario::kFig1RandomZ});
  validate(c);
  const std::size_t graphs = c.graphs_per_point;
  auto per_task = run_tasks(c.n_values.size() * graphs, options, [&](std::size_t task) {
    const std::size_t point = task / graphs;
    const std::size_t n = c.n_values[point];
    const std::uint64_t seed = split_seed(c.root_seed, point, task % graphs);
    const Dag dag = generate_random_dag({n, c.p1, seed});
    std::vector<TrialRecord> out;
    const auto pairs = pick_pairs(c, dag, seed, c.p1, out);
    SeparationChecker checker(dag);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      for (std::size_t r = 0; r < c.p2_values.size(); ++r) {
        const double p2 = c.p2_values[r];
        Rng rng(split_seed(seed, kSetTag + q, r));
        std::size_t hits = 0;
        for (std::size_t s = 0; s < c.sets_per_pair; ++s)
          if (checker.separated(pairs[q], sample_bernoulli_set(n, pairs[q], p2, rng))) ++hits;
        auto rec = trial(c, n, c.p1, seed, pairs[q], "dsep_ratio",
                         static_cast<double>(hits) / static_cast<double>(c.sets_per_pair));
        rec.p2 = p2;
        auto in = bound_input(n, c.p1, pairs[q]);
        in.p2 = p2;
        rec.bound_value = bounds::random_z(in);
        out.push_back(std::move(rec));
      }
    }
    return out;
  });

  ExperimentResult result;
  for (std::size_t point = 0; point < c.n_values.size(); ++point) {
    std::vector<TrialRecord> point_trials;
    for (std::size_t g = 0; g < graphs; ++g) append(point_trials, per_task[point * graphs + g]);
    const std::size_t n = c.n_values[point];
    for (double p2 : c.p2_values) {
      const auto ratios = values_of(point_trials, "dsep_ratio", p2);
      if (ratios.empty()) continue;
      bounds::BoundInput in{n, c.p1, p2, 2, std::nullopt, std::nullopt};
      const double simple = bounds::random_z_simple(in);
      result.summaries.push_back(summary(c, n, c.p1, "p2", p2, "max_ratio",
                                         *std::max_element(ratios.begin(), ratios.end()),
                                         std::nullopt, ratios.size(), simple));
      const auto est = estimate_mean(ratios);
      result.summaries.push_back(
          summary(c, n, c.p1, "p2", p2, "mean", est.mean, est.std_error, ratios.size(), simple));
    }
    append(result.trials, point_trials);
  }
  return result;
}

ExperimentResult run_perfect_pc(const ExperimentConfig& c, const RunOptions& options) {
  require_scenario(c, {Scenario::kPerfectPc});
  validate(c);
  const std::size_t graphs = c.graphs_per_point;
  const std::size_t widest = *std::max_element(c.c_max_values.begin(), c.c_max_values.end());
  auto per_task = run_tasks(c.n_values.size() * graphs, options, [&](std::size_t task) {
    const std::size_t point = task / graphs;
    const std::size_t n = c.n_values[point];
    const std::uint64_t seed = split_seed(c.root_seed, point, task % graphs);
    const Dag dag = generate_random_dag({n, c.p1, seed});
    std::vector<TrialRecord> out;
    for (NodePair pair : pick_pairs(c, dag, seed, c.p1, out)) {
      // One search at the widest budget answers every smaller c_max.
      const auto size = min_separator_size(dag, pair, widest);
      const auto bs = bounds::bounded_size(bound_input(n, c.p1, pair));
      for (std::size_t c_max : c.c_max_values) {
        auto rec = trial(c, n, c.p1, seed, pair, "found_separator",
                         size && *size <= c_max ? 1.0 : 0.0);
        rec.c_max = c_max;
        if (static_cast<double>(c_max) <= bs.threshold) rec.bound_value = bs.probability;
        out.push_back(std::move(rec));
      }
    }
    return out;
  });

  ExperimentResult result;
  for (std::size_t point = 0; point < c.n_values.size(); ++point) {
    std::vector<TrialRecord> point_trials;
    for (std::size_t g = 0; g < graphs; ++g) append(point_trials, per_task[point * graphs + g]);
    const std::size_t n = c.n_values[point];
    for (std::size_t c_max : c.c_max_values) {
      const auto found = values_of(point_trials, "found_separator", std::nullopt, c_max);
      if (found.empty()) continue;
      const auto est = estimate_mean(found);
      result.summaries.push_back(summary(c, n, c.p1, "c_max", static_cast<double>(c_max),
                                         "precision", est.mean, est.std_error, found.size(),
                                         std::nullopt));
    }
    append(result.trials, point_trials);
  }
  return result;
}

ExperimentResult run_bound_validation(const ExperimentConfig& c, const RunOptions& options) {
  require_scenario(c, {Scenario::kBoundRandomZ, Scenario::kBoundBoundedSize, Scenario::kBoundFixedSize});
  validate(c);

  // One point per (n, parameter value).
  std::size_t params = 1;
  if (c.scenario == Scenario::kBoundRandomZ) params = c.p2_values.size();
  if (c.scenario == Scenario::kBoundFixedSize) params = c.alpha_values.size();
  const std::size_t points = c.n_values.size() * params;
  const std::size_t graphs = c.graphs_per_point;

  auto point_bound = [&](std::size_t point) {
    const std::size_t n = c.n_values[point / params];
    auto in = bound_input(n, c.p1, fixed_pair(c, n));
    switch (c.scenario) {
      case Scenario::kBoundRandomZ:
        in.p2 = c.p2_values[point % params];
        return bounds::random_z(in);
      case Scenario::kBoundFixedSize:
        in.alpha = c.alpha_values[point % params];
        return bounds::fixed_size(in);
      default:
        return bounds::bounded_size(in).probability;
    }
  };

  auto per_task = run_tasks(points * graphs, options, [&](std::size_t task) {
    const std::size_t point = task / graphs;
    const std::size_t n = c.n_values[point / params];
    const NodePair pair = fixed_pair(c, n);
    const std::uint64_t seed = split_seed(c.root_seed, point, task % graphs);
    const Dag dag = generate_random_dag({n, c.p1, seed}, EdgeConstraint{pair, false});
    const double bound = point_bound(point);
    std::vector<TrialRecord> out;

    auto emit = [&](std::string stat, double value) {
      auto rec = trial(c, n, c.p1, seed, pair, std::move(stat), value);
      if (c.scenario == Scenario::kBoundRandomZ) rec.p2 = c.p2_values[point % params];
      if (c.scenario == Scenario::kBoundFixedSize) rec.alpha = c.alpha_values[point % params];
      rec.bound_value = bound;
      out.push_back(std::move(rec));
    };

    if (c.scenario == Scenario::kBoundBoundedSize) {
      const auto threshold = bounds::bounded_size(bound_input(n, c.p1, pair)).threshold;
      const auto s_max = static_cast<std::size_t>(std::floor(threshold));
      emit("found_separator", min_separator_size(dag, pair, s_max) ? 1.0 : 0.0);
      return out;
    }

    SeparationChecker checker(dag);
    Rng rng(split_seed(seed, kSetTag));
    std::size_t separated = 0;
    std::size_t pseudo = 0;
    for (std::size_t s = 0; s < c.sets_per_pair; ++s) {
      const auto z = c.scenario == Scenario::kBoundRandomZ
                         ? sample_bernoulli_set(n, pair, c.p2_values[point % params], rng)
                         : sample_fixed_size_set(n, pair, c.alpha_values[point % params], rng);
      if (checker.separated(pair, z)) ++separated;
      if (is_pseudoseparated(dag, pair, z)) ++pseudo;
    }
    const auto sets = static_cast<double>(c.sets_per_pair);
    emit("dsep_ratio", static_cast<double>(separated) / sets);
    emit("pseudosep_ratio", static_cast<double>(pseudo) / sets);
    return out;
  });

  ExperimentResult result;
  for (std::size_t point = 0; point < points; ++point) {
    std::vector<TrialRecord> point_trials;
    for (std::size_t g = 0; g < graphs; ++g) append(point_trials, per_task[point * graphs + g]);
    const std::size_t n = c.n_values[point / params];
    const NodePair pair = fixed_pair(c, n);
    const double bound = point_bound(point);

    std::string param_name = "s_max";
    double param_value =
        std::floor(bounds::bounded_size(bound_input(n, c.p1, pair)).threshold);
    if (c.scenario == Scenario::kBoundRandomZ) {
      param_name = "p2";
      param_value = c.p2_values[point % params];
    } else if (c.scenario == Scenario::kBoundFixedSize) {
      param_name = "alpha";
      param_value = static_cast<double>(c.alpha_values[point % params]);
    }

    const char* primary = c.scenario == Scenario::kBoundBoundedSize ? "found_separator" : "dsep_ratio";
    const auto est = estimate_mean(values_of(point_trials, primary));
    result.summaries.push_back(
        summary(c, n, c.p1, param_name, param_value, "mean", est.mean, est.std_error, graphs, bound));
    if (c.scenario != Scenario::kBoundBoundedSize) {
      const auto ps = estimate_mean(values_of(point_trials, "pseudosep_ratio"));
      result.summaries.push_back(summary(c, n, c.p1, param_name, param_value, "pseudosep_mean",
                                         ps.mean, ps.std_error, graphs, bound));
    }
    append(result.trials, point_trials);
  }
  return result;
}

ExperimentResult run_sgs_calls(const ExperimentConfig& c, const RunOptions& options) {
  require_scenario(c, {Scenario::kSgsCalls});
  validate(c);
  const std::size_t graphs = c.graphs_per_point;
  auto per_task = run_tasks(c.n_values.size() * graphs, options, [&](std::size_t task) {
    const std::size_t point = task / graphs;
    const std::size_t n = c.n_values[point];
    const NodePair pair = fixed_pair(c, n);
    const std::uint64_t seed = split_seed(c.root_seed, point, task % graphs);
    const auto lb = bounds::sgs_calls_lower_bound({n, c.p1});
    SgsConfig sgs{std::nullopt, split_seed(seed, kSgsTag)};

    std::vector<TrialRecord> out;
    // Same draws for both variants; the conditional one has the pair's edge excised.
    const Dag conditional = generate_random_dag({n, c.p1, seed}, EdgeConstraint{pair, false});
    const Dag free_graph = generate_random_dag({n, c.p1, seed});
    auto rec = trial(c, n, c.p1, seed, pair, "oracle_calls_conditional",
                     static_cast<double>(uniform_sgs_pair(conditional, pair, sgs).calls));
    rec.bound_value = lb.conditional;
    out.push_back(std::move(rec));
    rec = trial(c, n, c.p1, seed, pair, "oracle_calls_unconditional",
                static_cast<double>(uniform_sgs_pair(free_graph, pair, sgs).calls));
    rec.bound_value = lb.unconditional;
    out.push_back(std::move(rec));
    return out;
  });

  ExperimentResult result;
  for (std::size_t point = 0; point < c.n_values.size(); ++point) {
    std::vector<TrialRecord> point_trials;
    for (std::size_t g = 0; g < graphs; ++g) append(point_trials, per_task[point * graphs + g]);
    const std::size_t n = c.n_values[point];
    const auto lb = bounds::sgs_calls_lower_bound({n, c.p1});
    const auto cond = estimate_mean(values_of(point_trials, "oracle_calls_conditional"));
    const auto uncond = estimate_mean(values_of(point_trials, "oracle_calls_unconditional"));
    result.summaries.push_back(summary(c, n, c.p1, "edge_forced_absent", 1.0, "mean_calls",
                                       cond.mean, cond.std_error, graphs, lb.conditional));
    result.summaries.push_back(summary(c, n, c.p1, "edge_forced_absent", 0.0, "mean_calls",
                                       uncond.mean, uncond.std_error, graphs, lb.unconditional));
    append(result.trials, point_trials);
  }
  return result;
}

ExperimentResult run_sparsity_curve(const ExperimentConfig& c, const RunOptions& options) {
  require_scenario(c, {Scenario::kSparsityCurve});
  validate(c);
  const std::size_t graphs = c.graphs_per_point;
  auto p1_at = [&](std::size_t n) {
    return c.p1_coefficient ? *c.p1_coefficient / static_cast<double>(n) : c.p1;
  };
  auto per_task = run_tasks(c.n_values.size() * graphs, options, [&](std::size_t task) {
    const std::size_t point = task / graphs;
    const std::size_t n = c.n_values[point];
    const double p1 = p1_at(n);
    const std::uint64_t seed = split_seed(c.root_seed, point, task % graphs);
    const Dag dag = generate_random_dag({n, p1, seed});
    const double d1 = density(dag);
    std::vector<TrialRecord> out;
    out.push_back(trial(c, n, p1, seed, {0, 0}, "density", d1));
    out.push_back(trial(c, n, p1, seed, {0, 0}, "sparse_ratio", bounds::sparse_graph_ratio(n, d1)));
    return out;
  });

  ExperimentResult result;
  for (std::size_t point = 0; point < c.n_values.size(); ++point) {
    std::vector<TrialRecord> point_trials;
    for (std::size_t g = 0; g < graphs; ++g) append(point_trials, per_task[point * graphs + g]);
    const std::size_t n = c.n_values[point];
    const double p1 = p1_at(n);
    const auto ratio = estimate_mean(values_of(point_trials, "sparse_ratio"));
    const auto dens = estimate_mean(values_of(point_trials, "density"));
    result.summaries.push_back(summary(c, n, p1, "p1", p1, "mean", ratio.mean, ratio.std_error,
                                       graphs, std::nullopt));
    result.summaries.push_back(summary(c, n, p1, "p1", p1, "mean_density", dens.mean,
                                       dens.std_error, graphs, std::nullopt));
    append(result.trials, point_trials);
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& c, const RunOptions& options) {
  switch (c.scenario) {
    case Scenario::kFig1RandomZ:
      return run_fig1(c, options);
    case Scenario::kPerfectPc:
      return run_perfect_pc(c, options);
    case Scenario::kBoundRandomZ:
    case Scenario::kBoundBoundedSize:
    case Scenario::kBoundFixedSize:
      return run_bound_validation(c, options);
    case Scenario::kSgsCalls:
      return run_sgs_calls(c, options);
    case Scenario::kSparsityCurve:
      return run_sparsity_curve(c, options);
  }
  throw DomainError("scenario", "unhandled");
}

}  // namespace dsep::experiments
