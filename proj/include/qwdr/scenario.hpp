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

#ifndef QWDR_SCENARIO_HPP_
#define QWDR_SCENARIO_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qwdr/channel.hpp"
#include "qwdr/engine.hpp"
#include "qwdr/network.hpp"
#include "qwdr/solver.hpp"

namespace qwdr {

struct CapacitySettings {
  std::size_t channel_samples = 200;
  double tolerance = 1e-6;
  bool integer_service = true;
  std::size_t max_activation_sets = 500000;
};

// Everything needed to run one experiment, with every default resolved.
struct ScenarioConfig {
  std::string name = "scenario";
  int num_nodes = 0;
  std::map<NodeId, std::pair<double, double>> positions;
  std::vector<Link> links;
  std::vector<std::optional<double>> link_mean_gains;  // explicit per-link mean gain
  std::vector<FlowSpec> flows;

  ChannelParams channel;
  double gain_scale = 1.0;  // mean gain = gain_scale / d^2 without an explicit mean_gain
  std::uint64_t arrival_seed = 2;

  double k0 = 0.01;
  SolverConfig solver;
  WeightConfig weights;

  Mode mode = Mode::kQwdr;
  Slot horizon = 100000;
  std::size_t replications = 5;
  Slot queue_sample_interval = 100;
  bool trace_schedule = false;
  std::size_t solver_trace_reviews = 0;

  CapacitySettings capacity;
  nlohmann::json metadata = nlohmann::json::object();
};

// Parses and validates; throws ConfigError with a field path on any schema
// violation, unknown key, or invalid network.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::string& path);

// Fully resolved form; parse_scenario(to_json(c)) reproduces c.
nlohmann::json to_json(const ScenarioConfig& config);

void set_mode(ScenarioConfig& config, Mode mode);

NetworkModel build_network(const ScenarioConfig& config);
ChannelModel build_channel(const ScenarioConfig& config, const NetworkModel& network,
                           std::uint64_t seed);
RunOptions build_run_options(const ScenarioConfig& config);

// Seeds for replication r: base seeds offset by r.
std::uint64_t channel_seed(const ScenarioConfig& config, std::size_t replication);
std::uint64_t arrival_seed(const ScenarioConfig& config, std::size_t replication);

inline constexpr int kPaper15Rows = 5;
// Delay targets (F10, F11, F6) for rows 2..5.
inline constexpr double kPaper15Targets[4][3] = {
    {200, 350, 70}, {150, 300, 60}, {150, 150, 45}, {200, 130, 50}};

// Fifteen-node, seven-flow reference network: fixed routes, arrival rates
// near the edge of the capacity region and the default controller constants.
// Node coordinates are digitized from a drawing and therefore approximate;
// the noise power is a calibration choice. Row 1 carries no delay targets,
// rows 2..5 the target triples listed in kPaper15Targets.
ScenarioConfig make_paper15_scenario(std::uint64_t seed, int row = 2);

// Reference unweighted mean delays (slots) of the seven preset flows.
std::vector<std::pair<std::string, double>> paper15_reference_delays();

}  // namespace qwdr

#endif  // QWDR_SCENARIO_HPP_
