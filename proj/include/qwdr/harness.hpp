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

#ifndef QWDR_HARNESS_HPP_
#define QWDR_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "json.hpp"
#include "qwdr/engine.hpp"
#include "qwdr/metrics.hpp"
#include "qwdr/oracle.hpp"
#include "qwdr/scenario.hpp"

namespace qwdr {

// Channel seed S, arrival seed S + 1000.
void reseed(ScenarioConfig& config, std::uint64_t seed);

struct ReplicationOutput {
  RunResult result;
  RunMetrics metrics;
};

ReplicationOutput run_replication(const ScenarioConfig& config, std::size_t replication,
                                  bool strict_invariants = true);

struct ExperimentResult {
  std::vector<RunMetrics> replications;
  RunMetrics aggregate;
  RunResult first;  // traces come from replication 0
};

ExperimentResult run_experiment(const ScenarioConfig& config, bool strict_invariants = true);

nlohmann::json experiment_json(const ExperimentResult& experiment);

// metrics.json, delays.csv, queues.csv, reviews.csv, plus schedule.csv and
// objective.csv when the traces were recorded.
void write_outputs(const std::filesystem::path& dir, const ScenarioConfig& config,
                   const ExperimentResult& experiment);

oracle::CapacityResult capacity_report(const ScenarioConfig& config);

}  // namespace qwdr

#endif  // QWDR_HARNESS_HPP_
