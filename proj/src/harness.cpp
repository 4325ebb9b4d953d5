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

#include "qwdr/harness.hpp"

#include <fstream>
#include <stdexcept>

namespace qwdr {

using nlohmann::json;

void reseed(ScenarioConfig& config, std::uint64_t seed) {
  config.channel.seed = seed;
  config.arrival_seed = seed + 1000;
}

ReplicationOutput run_replication(const ScenarioConfig& config, std::size_t replication,
                                  bool strict_invariants) {
  const NetworkModel network = build_network(config);
  ChannelModel channel = build_channel(config, network, channel_seed(config, replication));
  ArrivalProcess arrivals(network, arrival_seed(config, replication));
  RunOptions options = build_run_options(config);
  options.strict_invariants = strict_invariants;

  ReplicationOutput out;
  out.result = run(network, channel, arrivals, options);
  out.metrics = collect_metrics(out.result, network);
  out.metrics.scenario = config.name;
  out.metrics.mode = to_string(config.mode);
  out.metrics.config = to_json(config);
  out.metrics.config["resolved_seeds"] = {{"replication", replication},
                                          {"channel_seed", channel_seed(config, replication)},
                                          {"arrival_seed", arrival_seed(config, replication)}};
  return out;
}

ExperimentResult run_experiment(const ScenarioConfig& config, bool strict_invariants) {
  ExperimentResult experiment;
  for (std::size_t r = 0; r < config.replications; ++r) {
    ReplicationOutput out = run_replication(config, r, strict_invariants);
    experiment.replications.push_back(std::move(out.metrics));
    if (r == 0) experiment.first = std::move(out.result);
  }
  experiment.aggregate = aggregate_metrics(experiment.replications);
  experiment.aggregate.config = to_json(config);
  return experiment;
}

json experiment_json(const ExperimentResult& experiment) {
  json doc = to_json(experiment.aggregate);
  json reps = json::array();
  for (const RunMetrics& r : experiment.replications) {
    json rep = to_json(r);
    rep["seeds"] = r.config.at("resolved_seeds");
    rep.erase("config");
    reps.push_back(std::move(rep));
  }
  doc["per_replication"] = std::move(reps);
  return doc;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_outputs(const std::filesystem::path& dir, const ScenarioConfig& config,
                   const ExperimentResult& experiment) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "metrics.json");
    out << experiment_json(experiment).dump(2) << "\n";
  }
  {
    auto out = open_output(dir / "delays.csv");
    out << "flow,target,achieved\n";
    for (const FlowMetrics& f : experiment.aggregate.flows) {
      out << f.name << ",";
      if (f.delay_target) out << json(*f.delay_target).dump();
      out << ",";
      if (auto d = f.reported_delay()) out << *d;
      out << "\n";
    }
  }
  const RunResult& first = experiment.first;
  {
    auto out = open_output(dir / "queues.csv");
    out << "slot,total";
    for (const FlowSpec& f : config.flows) out << "," << f.name;
    out << "\n";
    for (const QueueSample& s : first.queue_samples) {
      out << s.slot << "," << s.total;
      for (PacketCount q : s.per_flow) out << "," << q;
      out << "\n";
    }
  }
  {
    auto out = open_output(dir / "reviews.csv");
    out << "review_index,T_O,T_N,Q_norm\n";
    for (const ReviewRecord& r : first.reviews) {
      out << r.index << "," << r.start << "," << r.end << "," << r.total_queue << "\n";
    }
  }
  if (config.trace_schedule) {
    auto out = open_output(dir / "schedule.csv");
    out << "slot,i,j,f\n";
    for (const ScheduleTraceRow& r : first.schedule_trace) {
      out << r.slot << "," << r.from << "," << r.to << "," << r.flow_id << "\n";
    }
  }
  if (config.solver_trace_reviews > 0) {
    auto out = open_output(dir / "objective.csv");
    out << "review_index,step,objective\n";
    for (const ObjectiveTraceRow& r : first.objective_trace) {
      out << r.review << "," << r.step << "," << json(r.objective).dump() << "\n";
    }
  }
}

oracle::CapacityResult capacity_report(const ScenarioConfig& config) {
  const NetworkModel network = build_network(config);
  const ChannelModel channel = build_channel(config, network, channel_seed(config, 0));
  oracle::CapacityQuery query =
      oracle::make_capacity_query(network, channel, config.capacity.channel_samples);
  query.integer_service = config.capacity.integer_service;
  query.tolerance = config.capacity.tolerance;
  query.max_activation_sets = config.capacity.max_activation_sets;
  return oracle::capacity_membership(query);
}

}  // namespace qwdr
