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

#ifndef QWDR_METRICS_HPP_
#define QWDR_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwdr/engine.hpp"
#include "qwdr/network.hpp"

namespace qwdr {

// Half away from zero: 3.5 -> 4.
std::int64_t round_delay(double delay);

struct FlowMetrics {
  std::string name;
  NodeId flow_id = 0;
  double arrival_rate = 0.0;
  std::optional<double> delay_target;
  PacketCount arrived = 0;
  PacketCount delivered = 0;
  std::optional<double> mean_delay;  // absent when nothing was delivered
  std::map<Slot, PacketCount> delay_histogram;
  double throughput = 0.0;       // delivered per slot over the whole run
  double late_throughput = 0.0;  // delivered per slot over the second half

  std::optional<std::int64_t> reported_delay() const;
};

struct RunMetrics {
  std::string scenario;
  std::string mode;
  Slot horizon = 0;
  std::size_t replications = 1;
  std::vector<FlowMetrics> flows;
  PacketCount max_total_queue = 0;
  double mean_total_queue = 0.0;
  std::size_t reviews = 0;
  InvariantCounters invariants;
  nlohmann::json config = nlohmann::json::object();

  const FlowMetrics& flow(const std::string& name) const;
};

RunMetrics collect_metrics(const RunResult& run, const NetworkModel& model);

// Replication means. Mean delays average only the replications that
// delivered something; histograms are summed.
RunMetrics aggregate_metrics(const std::vector<RunMetrics>& runs);

nlohmann::json to_json(const RunMetrics& metrics);
std::string dump_metrics(const RunMetrics& metrics);

enum class TargetStatus { kMet, kMissed, kUntargeted };
std::string to_string(TargetStatus status);

struct FlowComparison {
  std::string name;
  std::optional<double> delay_target;
  std::optional<double> baseline_delay;
  std::optional<double> weighted_delay;
  std::optional<double> ratio;  // weighted / baseline
  TargetStatus status = TargetStatus::kUntargeted;
};

struct ComparisonReport {
  std::vector<FlowComparison> flows;

  // Mean of (1 - ratio) over targeted flows with both delays present.
  std::optional<double> mean_targeted_reduction() const;
};

// Throws ConfigError when the two runs do not describe the same flows.
ComparisonReport compare_runs(const RunMetrics& baseline, const RunMetrics& weighted);

nlohmann::json to_json(const ComparisonReport& report);

}  // namespace qwdr

#endif  // QWDR_METRICS_HPP_
