#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dsep/bounds.hpp"
#include "dsep/error.hpp"
#include "dsep/experiments.hpp"
#include "dsep/rng.hpp"
#include "dsep/separation.hpp"

using namespace dsep;
using namespace dsep::experiments;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "dsep_experiment_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

ExperimentConfig small(Scenario s) {
  auto c = default_config(s);
  c.root_seed = 77;
  switch (s) {
    case Scenario::kFig1RandomZ:
      c.n_values = {12, 20};
      c.pairs_per_graph = 5;
      c.sets_per_pair = 40;
      c.graphs_per_point = 2;
      c.p1 = 0.2;
      break;
    case Scenario::kPerfectPc:
      c.n_values = {10, 14};
      c.pairs_per_graph = 6;
      c.graphs_per_point = 2;
      c.p1 = 0.2;
      break;
    case Scenario::kBoundRandomZ:
    case Scenario::kBoundFixedSize:
      c.n_values = {12};
      c.pair_j = 8;
      c.alpha_values = {0, 3};
      c.graphs_per_point = 50;
      c.sets_per_pair = 4;
      break;
    case Scenario::kBoundBoundedSize:
      c.n_values = {12};
      c.pair_j = 11;
      c.graphs_per_point = 40;
      break;
    case Scenario::kSgsCalls:
      c.n_values = {6, 8};
      c.graphs_per_point = 30;
      break;
    case Scenario::kSparsityCurve:
      c.graphs_per_point = 20;
      break;
  }
  return c;
}

const Scenario kAll[] = {Scenario::kFig1RandomZ,      Scenario::kPerfectPc,      Scenario::kBoundRandomZ,
                         Scenario::kBoundBoundedSize, Scenario::kBoundFixedSize, Scenario::kSgsCalls,
                         Scenario::kSparsityCurve};

}  // namespace

TEST(Config, RoundTripEveryScenario) {
  for (Scenario s : kAll) {
    auto c = small(s);
    c.output_path = scratch("x.csv").string();
    const auto path = scratch(std::string(to_string(s)) + ".json").string();
    write_config(c, path);
    EXPECT_EQ(load_config(path), c) << to_string(s);
    EXPECT_EQ(config_from_json(config_to_json(c)), c);
  }
}

TEST(Config, RejectsUnknownScenarioNamingIt) {
  try {
    config_from_json(R"({"scenario":"fig9","n_values":[5],"root_seed":1})");
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("fig9"), std::string::npos);
    EXPECT_EQ(e.field(), "scenario");
  }
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from_json("{not json"), FormatError);
  EXPECT_THROW(config_from_json(R"({"scenario":"perfect_pc","n_values":[5],"root_seed":1,"c_max_values":[2],"bogus":1})"),
               DomainError);
  EXPECT_THROW(config_from_json(R"({"scenario":"perfect_pc","n_values":[5],"c_max_values":[2]})"), DomainError);
  EXPECT_THROW(config_from_json(R"({"scenario":"fig1_random_z","n_values":[5],"root_seed":1,"p1":1.0,"p2_values":[0.5]})"),
               DomainError);
  EXPECT_THROW(config_from_json(R"({"scenario":"fig1_random_z","n_values":[5],"root_seed":1})"), DomainError);
  EXPECT_THROW(load_config(scratch("missing.json").string() + ".none"), FormatError);
}

TEST(Config, ValidationGuards) {
  auto sgs = small(Scenario::kSgsCalls);
  sgs.n_values = {17};
  EXPECT_THROW(validate(sgs), DomainError);
  auto fixed = small(Scenario::kBoundFixedSize);
  fixed.alpha_values = {11};
  EXPECT_THROW(validate(fixed), DomainError);
  auto pair = small(Scenario::kBoundRandomZ);
  pair.pair_j = 12;
  EXPECT_THROW(validate(pair), DomainError);
  for (Scenario s : kAll) EXPECT_NO_THROW(validate(default_config(s))) << to_string(s);
}

TEST(Csv, RowCountsAndHeaders) {
  const auto r = run_experiment(small(Scenario::kPerfectPc), {1});
  const auto path = scratch("pc.csv").string();
  write_result(r, path);
  const auto summary = slurp(path);
  const auto trials = slurp(trials_path_for(path));
  EXPECT_EQ(line_count(summary), r.summaries.size() + 1);
  EXPECT_EQ(line_count(trials), r.trials.size() + 1);
  EXPECT_EQ(summary.substr(0, kSummaryHeader.size()), kSummaryHeader);
  EXPECT_EQ(trials.substr(0, kTrialHeader.size()), kTrialHeader);
  EXPECT_EQ(trials_path_for("/a/b/out.csv"), "/a/b/out.trials.csv");
}

TEST(Csv, ShortestRoundTripDecimals) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 0.161634, 123456789.0}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.5), "0.5");
  SummaryRecord s{"sgs_calls", 10, 0.5, "edge_forced_absent", 1.0, "mean_calls", 2.25, std::nullopt, 4, std::nullopt};
  const auto row = format_csv(std::span<const SummaryRecord>(&s, 1));
  EXPECT_EQ(row, std::string(kSummaryHeader) + "\nsgs_calls,10,0.5,edge_forced_absent,1,mean_calls,2.25,,4,\n");
}

TEST(Runs, ByteIdenticalAcrossRepeatsAndThreadCounts) {
  for (Scenario s : kAll) {
    const auto c = small(s);
    const auto a = run_experiment(c, {1});
    const auto b = run_experiment(c, {3});
    EXPECT_EQ(format_csv(a.summaries), format_csv(b.summaries)) << to_string(s);
    EXPECT_EQ(format_csv(a.trials), format_csv(b.trials)) << to_string(s);
    ASSERT_FALSE(a.summaries.empty());
    for (const auto& sr : a.summaries) {
      EXPECT_GE(sr.sample_count, 1u);
      if (sr.std_error) EXPECT_GE(*sr.std_error, 0.0);
    }
  }
}

TEST(Runs, DerivedSeedsNeverCollide) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 64; ++k)
    for (std::uint64_t t = 0; t < 20000; ++t) ASSERT_TRUE(seen.insert(split_seed(20240601, k, t)).second);

  const auto r = run_experiment(small(Scenario::kBoundFixedSize), {1});
  std::set<std::uint64_t> graph_seeds;
  for (const auto& t : r.trials) graph_seeds.insert(t.graph_seed);
  // Two alpha points of 50 graphs each; every trial has its own seed.
  EXPECT_EQ(graph_seeds.size(), 100u);
}

TEST(Runs, ConditionalGraphsLackThePairEdge) {
  for (Scenario s : {Scenario::kBoundRandomZ, Scenario::kBoundBoundedSize, Scenario::kBoundFixedSize}) {
    const auto c = small(s);
    const auto r = run_experiment(c, {1});
    for (const auto& t : r.trials) {
      const Dag d = generate_random_dag({t.n, t.p1, t.graph_seed}, EdgeConstraint{{t.i, t.j}, false});
      ASSERT_FALSE(d.has_edge(t.i, t.j));
      ASSERT_TRUE(t.bound_value.has_value());
    }
  }
}

TEST(Fig1, SingleSetRatiosAreBinary) {
  auto c = small(Scenario::kFig1RandomZ);
  c.sets_per_pair = 1;
  const auto r = run_fig1(c, {1});
  for (const auto& t : r.trials)
    if (t.stat_name == "dsep_ratio") EXPECT_TRUE(t.stat_value == 0.0 || t.stat_value == 1.0);
}

TEST(Fig1, ThreeNodeRatioMatchesEnumeration) {
  auto c = small(Scenario::kFig1RandomZ);
  c.n_values = {3};
  c.p1 = 0.1;
  c.p2_values = {0.5};
  c.pairs_per_graph = 1;
  c.sets_per_pair = 4000;
  c.graphs_per_point = 10;
  const auto r = run_fig1(c, {1});
  int checked = 0;
  for (const auto& t : r.trials) {
    if (t.stat_name != "dsep_ratio") continue;
    const Dag d = generate_random_dag({3, c.p1, t.graph_seed});
    const NodePair p{t.i, t.j};
    NodeSet none(3), mid(3);
    for (Node k = 0; k < 3; ++k)
      if (k != p.i && k != p.j) mid.insert(k);
    const double exact = 0.5 * is_d_separated(d, p, none) + 0.5 * is_d_separated(d, p, mid);
    const double se = std::sqrt(std::max(exact * (1 - exact), 1e-12) / c.sets_per_pair);
    EXPECT_NEAR(t.stat_value, exact, 4 * se + 1e-12);
    EXPECT_DOUBLE_EQ(*t.bound_value, bounds::random_z({3, c.p1, 0.5, static_cast<std::size_t>(t.j) + 1, {}, {}}));
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Fig1, ShortfallEmitsWarningRecord) {
  auto c = small(Scenario::kFig1RandomZ);
  c.n_values = {4};
  c.p1 = 0.9;
  c.pairs_per_graph = 6;
  const auto r = run_fig1(c, {1});
  bool warned = false;
  for (const auto& t : r.trials) warned |= t.stat_name == "available_pairs";
  EXPECT_TRUE(warned);
}

TEST(PerfectPc, FullBudgetGivesPrecisionOne) {
  auto c = small(Scenario::kPerfectPc);
  c.n_values = {8, 10};
  c.c_max_values = {8};
  c.p1 = 0.4;
  const auto r = run_perfect_pc(c, {1});
  for (const auto& s : r.summaries)
    if (s.stat_name == "precision") EXPECT_EQ(s.value, 1.0);
}

TEST(Sparsity, EdgelessDrawRatio) {
  auto c = small(Scenario::kSparsityCurve);
  c.n_values = {5};
  c.p1_coefficient = 0.05;
  const auto r = run_sparsity_curve(c, {1});
  bool saw_empty = false;
  for (std::size_t k = 0; k + 1 < r.trials.size(); k += 2) {
    if (r.trials[k].stat_value != 0.0) continue;
    saw_empty = true;
    EXPECT_EQ(r.trials[k + 1].stat_value, std::ldexp(1.0, -10));
  }
  EXPECT_TRUE(saw_empty);
}

TEST(SgsCalls, EdgelessTrialCostsOneCall) {
  auto c = small(Scenario::kSgsCalls);
  c.p1 = 0.02;
  c.n_values = {5};
  c.graphs_per_point = 50;
  const auto r = run_sgs_calls(c, {1});
  bool seen = false;
  for (const auto& t : r.trials) {
    const bool conditional = t.stat_name == "oracle_calls_conditional";
    const Dag d = conditional ? generate_random_dag({t.n, t.p1, t.graph_seed}, EdgeConstraint{{t.i, t.j}, false})
                              : generate_random_dag({t.n, t.p1, t.graph_seed});
    if (d.edge_count() == 0) {
      seen = true;
      EXPECT_EQ(t.stat_value, 1.0);
    }
  }
  EXPECT_TRUE(seen);
}
