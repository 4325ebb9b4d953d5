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

// Command-line front end: run, capacity, validate, paper15, compare.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwdr/errors.hpp"
#include "qwdr/harness.hpp"
#include "qwdr/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSize = 3;

struct RunArgs {
  std::string scenario;
  std::optional<std::int64_t> slots;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::size_t> replications;
  std::string out = "out";
};

qwdr::ScenarioConfig resolve(const RunArgs& args) {
  qwdr::ScenarioConfig config = qwdr::load_scenario(args.scenario);
  if (args.slots) {
    if (*args.slots < 0) throw qwdr::ConfigError("--slots: must be >= 0");
    config.horizon = *args.slots;
  }
  if (args.seed) qwdr::reseed(config, *args.seed);
  if (args.mode) qwdr::set_mode(config, qwdr::parse_mode(*args.mode));
  if (args.replications) {
    if (*args.replications < 1) throw qwdr::ConfigError("--replications: must be >= 1");
    config.replications = *args.replications;
  }
  return config;
}

void print_delays(const qwdr::RunMetrics& metrics) {
  std::cout << std::left << std::setw(8) << "flow" << std::setw(10) << "target" << std::setw(10)
            << "delay" << "throughput\n";
  for (const qwdr::FlowMetrics& f : metrics.flows) {
    std::cout << std::setw(8) << f.name << std::setw(10)
              << (f.delay_target ? nlohmann::json(*f.delay_target).dump() : "-") << std::setw(10)
              << (f.reported_delay() ? std::to_string(*f.reported_delay()) : "-") << f.throughput
              << "\n";
  }
}

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("scenario", args.scenario, "Scenario JSON file")->required();
  cmd->add_option("--slots", args.slots, "Override the horizon");
  cmd->add_option("--seed", args.seed, "Channel seed (arrivals use seed + 1000)");
  cmd->add_option("--mode", args.mode, "qwdr or unweighted");
  cmd->add_option("--replications", args.replications, "Number of seeded replications");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Queue weighted discrete review scheduling simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Simulate a scenario and write metrics");
  add_run_options(run_cmd, run_args);
  run_cmd->add_option("--out", run_args.out, "Output directory");

  std::string capacity_path;
  CLI::App* capacity_cmd =
      app.add_subcommand("capacity", "Print the capacity slack per (node, flow)");
  capacity_cmd->add_option("scenario", capacity_path, "Scenario JSON file")->required();

  std::string validate_path;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario and echo it resolved");
  validate_cmd->add_option("scenario", validate_path, "Scenario JSON file")->required();

  int row = 2;
  std::uint64_t preset_seed = 1;
  CLI::App* paper15_cmd = app.add_subcommand("paper15", "Emit the 15-node preset scenario");
  paper15_cmd->add_option("--row", row, "Target row, 1 for no targets")
      ->check(CLI::Range(1, qwdr::kPaper15Rows));
  paper15_cmd->add_option("--seed", preset_seed, "Channel seed");

  RunArgs compare_args;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Run unweighted and weighted modes and compare delays");
  add_run_options(compare_cmd, compare_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) {
      const qwdr::ScenarioConfig config = resolve(run_args);
      const qwdr::ExperimentResult experiment = qwdr::run_experiment(config);
      qwdr::write_outputs(run_args.out, config, experiment);
      print_delays(experiment.aggregate);
      std::cout << "outputs written to " << run_args.out << "\n";
    } else if (*capacity_cmd) {
      const qwdr::ScenarioConfig config = qwdr::load_scenario(capacity_path);
      const auto result = qwdr::capacity_report(config);
      std::cout << "membership " << qwdr::oracle::to_string(result.membership) << "\n";
      std::cout << "epsilon " << result.epsilon << "\n";
      std::cout << "activation_sets " << result.activation_sets << "\n";
      std::cout << "node,flow,arrival_rate,slack\n";
      for (const auto& r : result.rows) {
        std::cout << r.node << "," << r.flow_id << "," << r.arrival_rate << "," << r.slack << "\n";
      }
    } else if (*validate_cmd) {
      const qwdr::ScenarioConfig config = qwdr::load_scenario(validate_path);
      std::cout << qwdr::to_json(config).dump(2) << "\n";
    } else if (*paper15_cmd) {
      std::cout << qwdr::to_json(qwdr::make_paper15_scenario(preset_seed, row)).dump(2) << "\n";
    } else if (*compare_cmd) {
      qwdr::ScenarioConfig weighted = resolve(compare_args);
      qwdr::ScenarioConfig baseline = weighted;
      qwdr::set_mode(baseline, qwdr::Mode::kUnweighted);
      const auto base = qwdr::run_experiment(baseline);
      const auto ours = qwdr::run_experiment(weighted);
      const auto report = qwdr::compare_runs(base.aggregate, ours.aggregate);
      std::cout << qwdr::to_json(report).dump(2) << "\n";
    }
  } catch (const qwdr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qwdr::SizeError& e) {
    std::cerr << "size error: " << e.what() << "\n";
    return kExitSize;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
