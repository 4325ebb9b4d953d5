// Copyright 2026 The QWDR Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qwdr/errors.hpp"
#include "qwdr/harness.hpp"
#include "qwdr/metrics.hpp"
#include "qwdr/scenario.hpp"

namespace qwdr {
namespace {

using nlohmann::json;

json minimal() {
  return json::parse(R"({
    "nodes": 2,
    "links": [{"from": 1, "to": 2, "mean_gain": 5.0}],
    "flows": [{"route": [1, 2], "arrival_rate": 1.0}]
  })");
}

std::string config_error(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ScenarioTest, MinimalFileGetsDefaults) {
  const ScenarioConfig c = parse_scenario(minimal());
  EXPECT_EQ(c.channel.sigma2, 1.0);
  EXPECT_EQ(c.k0, 0.01);
  EXPECT_EQ(c.solver.alpha, 1e-4);
  EXPECT_EQ(c.solver.cycles, 15);
  EXPECT_EQ(c.weights.a1, 0.2);
  EXPECT_EQ(c.weights.a2, 2.0);
  EXPECT_EQ(c.horizon, 100000);
  EXPECT_EQ(c.replications, 5u);
  EXPECT_EQ(c.flows[0].name, "F2");
  EXPECT_EQ(c.mode, Mode::kQwdr);
}

TEST(ScenarioTest, FieldLevelErrors) {
  json missing_link = minimal();
  missing_link["nodes"] = 3;
  missing_link["flows"][0]["route"] = {1, 2, 3};
  EXPECT_NE(config_error(missing_link).find("flows[0].route"), std::string::npos);
  EXPECT_NE(config_error(missing_link).find("2->3"), std::string::npos);

  json negative = minimal();
  negative["flows"][0]["arrival_rate"] = -2.0;
  EXPECT_NE(config_error(negative).find("flows[0].arrival_rate"), std::string::npos);

  json typo = minimal();
  typo["solver"] = {{"alpah", 0.1}};
  EXPECT_NE(config_error(typo).find("solver.alpah"), std::string::npos);

  json wrong_type = minimal();
  wrong_type["review"] = {{"k0", "fast"}};
  EXPECT_NE(config_error(wrong_type).find("review.k0"), std::string::npos);

  json bad_mode = minimal();
  bad_mode["run"] = {{"mode", "fast"}};
  EXPECT_FALSE(config_error(bad_mode).empty());

  json no_geometry = minimal();
  no_geometry["links"][0].erase("mean_gain");
  EXPECT_NE(config_error(no_geometry).find("links[0]"), std::string::npos);

  json bad_a2 = minimal();
  bad_a2["weights"] = {{"a2", 0.0}};
  EXPECT_NE(config_error(bad_a2).find("weights.a2"), std::string::npos);
}

TEST(ScenarioTest, UnweightedModeForcesZeroGain) {
  json doc = minimal();
  doc["run"] = {{"mode", "unweighted"}};
  const ScenarioConfig c = parse_scenario(doc);
  EXPECT_EQ(c.mode, Mode::kUnweighted);
  EXPECT_EQ(c.weights.a1, 0.0);
}

TEST(ScenarioTest, GainsFromCoordinates) {
  json doc = minimal();
  doc["nodes"] = json::array({{{"id", 1}, {"x", 0.0}, {"y", 0.0}},
                              {{"id", 2}, {"x", 0.5}, {"y", 0.0}}});
  doc["links"][0].erase("mean_gain");
  doc["channel"] = {{"gain_scale", 2.0}};
  const ScenarioConfig c = parse_scenario(doc);
  const NetworkModel net = build_network(c);
  EXPECT_NEAR(build_channel(c, net, 1).mean_gain(0), 8.0, 1e-12);
}

TEST(ScenarioTest, JsonRoundTrip) {
  for (int row = 1; row <= kPaper15Rows; ++row) {
    const ScenarioConfig original = make_paper15_scenario(7, row);
    const json once = to_json(original);
    const ScenarioConfig parsed = parse_scenario(once);
    EXPECT_EQ(to_json(parsed), once);
  }
  const json minimal_echo = to_json(parse_scenario(minimal()));
  EXPECT_EQ(to_json(parse_scenario(minimal_echo)), minimal_echo);
}

TEST(ScenarioTest, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "qwdr_scenario_test.json";
  {
    std::ofstream out(path);
    out << minimal().dump();
  }
  EXPECT_EQ(load_scenario(path.string()).flows.size(), 1u);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_scenario(path.string()), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_scenario(path.string()), ConfigError);
}

TEST(Paper15Test, RatesConstantsAndTargets) {
  const ScenarioConfig c = make_paper15_scenario(1, 2);
  std::multiset<double> rates;
  for (const auto& f : c.flows) rates.insert(f.arrival_rate);
  EXPECT_EQ(rates, (std::multiset<double>{2.5, 2.5, 2.5, 2.5, 2.5, 3.74, 3.8}));
  EXPECT_EQ(c.horizon, 100000);
  EXPECT_EQ(c.k0, 0.01);
  EXPECT_EQ(c.solver.alpha, 1e-4);
  EXPECT_EQ(c.solver.cycles, 15);
  EXPECT_EQ(c.weights.a1, 0.2);
  EXPECT_EQ(c.weights.a2, 2.0);
  EXPECT_EQ(c.metadata.at("coordinates").get<std::string>().rfind("approximate", 0), 0u);
  for (const auto& [n, pos] : c.positions) {
    EXPECT_GE(pos.first, 0.0);
    EXPECT_LE(pos.first, 1.0);
    EXPECT_GE(pos.second, 0.0);
    EXPECT_LE(pos.second, 1.0);
  }

  const NetworkModel net = build_network(c);
  const auto thresholds = weight_thresholds(net);
  std::map<std::string, double> by_name;
  for (std::size_t f = 0; f < net.flows().size(); ++f) {
    if (thresholds[f]) by_name[net.flow(f).name] = *thresholds[f];
  }
  ASSERT_EQ(by_name.size(), 3u);
  EXPECT_NEAR(by_name["F10"], 748.0, 1e-9);
  EXPECT_NEAR(by_name["F11"], 875.0, 1e-9);
  EXPECT_NEAR(by_name["F6"], 266.0, 1e-9);

  for (const auto& f : make_paper15_scenario(1, 1).flows) EXPECT_FALSE(f.delay_target);
  EXPECT_THROW(make_paper15_scenario(1, 0), ConfigError);
  EXPECT_THROW(make_paper15_scenario(1, 6), ConfigError);
}

FlowTally tally(std::vector<Slot> delays, PacketCount arrived) {
  FlowTally t;
  t.arrived = arrived;
  for (Slot d : delays) {
    ++t.delivered;
    t.delay_sum += d;
    ++t.delay_histogram[d];
  }
  return t;
}

NetworkModel two_flows() {
  FlowSpec a;
  a.name = "A";
  a.route = {1, 2};
  a.arrival_rate = 1.0;
  a.delay_target = 5.0;
  FlowSpec b;
  b.name = "B";
  b.route = {2, 3};
  b.arrival_rate = 1.0;
  return NetworkModel(3, {{1, 2}, {2, 3}}, {a, b});
}

TEST(MetricsTest, MeanDelayAndRounding) {
  RunResult run;
  run.horizon = 100;
  run.flows = {tally({15}, 1), tally({}, 0)};
  run.total_queue.assign(100, 2);
  RunMetrics m = collect_metrics(run, two_flows());
  EXPECT_EQ(*m.flows[0].mean_delay, 15.0);
  EXPECT_FALSE(m.flows[1].mean_delay.has_value());
  EXPECT_FALSE(m.flows[1].reported_delay().has_value());
  EXPECT_EQ(to_json(m)["flows"][1]["mean_delay"], nullptr);

  run.flows[0] = tally({3, 4}, 2);
  m = collect_metrics(run, two_flows());
  EXPECT_EQ(*m.flows[0].mean_delay, 3.5);
  EXPECT_EQ(*m.flows[0].reported_delay(), 4);
  EXPECT_EQ(round_delay(2.5), 3);
  EXPECT_EQ(round_delay(2.4999), 2);
  EXPECT_EQ(m.max_total_queue, 2);
  EXPECT_EQ(m.mean_total_queue, 2.0);
  EXPECT_NEAR(m.flows[0].throughput, 0.02, 1e-15);
}

TEST(MetricsTest, CompareIdenticalRuns) {
  RunResult run;
  run.horizon = 10;
  run.flows = {tally({4, 6}, 2), tally({2}, 1)};
  const RunMetrics m = collect_metrics(run, two_flows());
  const ComparisonReport report = compare_runs(m, m);
  for (const auto& f : report.flows) EXPECT_EQ(*f.ratio, 1.0);
  EXPECT_EQ(report.flows[0].status, TargetStatus::kMet);
  EXPECT_EQ(report.flows[1].status, TargetStatus::kUntargeted);
  EXPECT_EQ(*report.mean_targeted_reduction(), 0.0);
}

TEST(MetricsTest, TargetFlags) {
  RunResult base;
  base.horizon = 10;
  base.flows = {tally({318}, 1), tally({68}, 1)};
  RunResult ours = base;
  ours.flows = {tally({188}, 1), tally({70}, 1)};
  const NetworkModel model = [] {
    FlowSpec a;
    a.name = "F10";
    a.route = {1, 2};
    a.arrival_rate = 3.74;
    a.delay_target = 200.0;
    FlowSpec b;
    b.name = "F4";
    b.route = {2, 3};
    b.arrival_rate = 2.5;
    return NetworkModel(3, {{1, 2}, {2, 3}}, {a, b});
  }();
  const auto report = compare_runs(collect_metrics(base, model), collect_metrics(ours, model));
  EXPECT_EQ(report.flows[0].status, TargetStatus::kMet);
  EXPECT_NEAR(*report.flows[0].ratio, 188.0 / 318.0, 1e-15);
  EXPECT_NEAR(*report.mean_targeted_reduction(), 1.0 - 188.0 / 318.0, 1e-15);

  RunResult missed = ours;
  missed.flows[0] = tally({260}, 1);
  EXPECT_EQ(compare_runs(collect_metrics(base, model), collect_metrics(missed, model))
                .flows[0]
                .status,
            TargetStatus::kMissed);
}

TEST(MetricsTest, CompareRejectsDifferentScenarios) {
  RunResult run;
  run.horizon = 10;
  run.flows = {tally({1}, 1), tally({1}, 1)};
  RunMetrics a = collect_metrics(run, two_flows());
  RunMetrics b = a;
  b.flows[1].name = "C";
  EXPECT_THROW(compare_runs(a, b), ConfigError);
  b = a;
  b.flows.pop_back();
  EXPECT_THROW(compare_runs(a, b), ConfigError);
}

TEST(MetricsTest, AggregateAveragesReplications) {
  RunResult run;
  run.horizon = 10;
  run.flows = {tally({2}, 1), tally({}, 0)};
  RunMetrics first = collect_metrics(run, two_flows());
  run.flows = {tally({4, 4}, 2), tally({6}, 1)};
  RunMetrics second = collect_metrics(run, two_flows());
  const RunMetrics agg = aggregate_metrics({first, second});
  EXPECT_EQ(agg.replications, 2u);
  EXPECT_EQ(*agg.flows[0].mean_delay, 3.0);
  EXPECT_EQ(*agg.flows[1].mean_delay, 6.0);
  EXPECT_EQ(agg.flows[0].delivered, 3);
  EXPECT_EQ(agg.flows[0].delay_histogram.at(4), 2);
}

ScenarioConfig small_config() {
  ScenarioConfig c = parse_scenario(json::parse(R"({
    "name": "tandem",
    "nodes": 3,
    "links": [{"from": 1, "to": 2, "mean_gain": 50.0}, {"from": 2, "to": 3, "mean_gain": 50.0}],
    "flows": [{"route": [1, 2, 3], "arrival_rate": 0.8, "delay_target": 3}],
    "run": {"horizon_slots": 3000, "replications": 2, "trace_schedule": true,
            "solver_trace_reviews": 2, "queue_sample_interval": 500}
  })"));
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(HarnessTest, OutputsAreWrittenAndDeterministic) {
  const ScenarioConfig c = small_config();
  const auto dir_a = std::filesystem::temp_directory_path() / "qwdr_harness_a";
  const auto dir_b = std::filesystem::temp_directory_path() / "qwdr_harness_b";
  write_outputs(dir_a, c, run_experiment(c));
  write_outputs(dir_b, c, run_experiment(c));
  for (const char* name :
       {"metrics.json", "delays.csv", "queues.csv", "reviews.csv", "schedule.csv", "objective.csv"}) {
    ASSERT_TRUE(std::filesystem::exists(dir_a / name)) << name;
    EXPECT_EQ(slurp(dir_a / name), slurp(dir_b / name)) << name;
  }
  const json metrics = json::parse(slurp(dir_a / "metrics.json"));
  EXPECT_EQ(metrics["replications"], 2);
  EXPECT_EQ(metrics["per_replication"].size(), 2u);
  EXPECT_EQ(metrics["config"]["solver"]["alpha"], 1e-4);
  EXPECT_EQ(metrics["config"]["channel"]["sigma2"], 1.0);
  EXPECT_EQ(metrics["per_replication"][1]["seeds"]["arrival_seed"], 3);
  EXPECT_EQ(slurp(dir_a / "delays.csv").substr(0, 21), "flow,target,achieved\n");
  EXPECT_EQ(slurp(dir_a / "reviews.csv").substr(0, 27), "review_index,T_O,T_N,Q_norm");
  EXPECT_EQ(slurp(dir_a / "schedule.csv").substr(0, 11), "slot,i,j,f\n");
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST(HarnessTest, ReplicationsUseDistinctSeeds) {
  const ScenarioConfig c = small_config();
  const auto r0 = run_replication(c, 0);
  const auto r1 = run_replication(c, 1);
  EXPECT_NE(r0.result.total_queue, r1.result.total_queue);
  EXPECT_EQ(r0.metrics.flows[0].arrived, run_replication(c, 0).metrics.flows[0].arrived);
}

TEST(HarnessTest, ReseedMovesBothStreams) {
  ScenarioConfig c = small_config();
  reseed(c, 40);
  EXPECT_EQ(c.channel.seed, 40u);
  EXPECT_EQ(c.arrival_seed, 1040u);
}

TEST(HarnessTest, CapacityReportForStableTandem) {
  ScenarioConfig c = small_config();
  c.channel.model = GainModel::kFixed;
  c.capacity.channel_samples = 1;
  const auto r = capacity_report(c);
  // floor(log(51)) = 3 on both hops.
  EXPECT_EQ(r.membership, oracle::Membership::kInside);
  EXPECT_NEAR(r.epsilon, (3.0 - 2.0 * 0.8) / 3.0, 1e-9);
}

}  // namespace
}  // namespace qwdr
