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

#include "qwdr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qwdr/errors.hpp"

namespace qwdr {

namespace {

using nlohmann::json;

// Reads one JSON object, tracking which keys were consumed so that typos in
// the scenario file surface as errors instead of silently using defaults.
class ObjectReader {
 public:
  ObjectReader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return doc_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key) + ": must be finite");
    return x;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key) || doc_.at(key).is_null()) {
      if (has(key)) seen_.insert(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(field(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.contains(key)) throw ConfigError(field(key) + ": unknown key");
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

int as_node(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer node id");
  return v.get<int>();
}

std::size_t non_negative(std::int64_t v, const std::string& path) {
  if (v < 0) throw ConfigError(path + ": must be >= 0");
  return static_cast<std::size_t>(v);
}

ProjectionMethod parse_projection(const std::string& name) {
  if (name == "closed_form") return ProjectionMethod::kClosedForm;
  if (name == "dykstra") return ProjectionMethod::kDykstra;
  throw ConfigError("solver.projection: expected \"closed_form\" or \"dykstra\", got \"" + name +
                    "\"");
}

std::string to_string(ProjectionMethod method) {
  return method == ProjectionMethod::kDykstra ? "dykstra" : "closed_form";
}

void parse_nodes(const json& nodes, ScenarioConfig& config) {
  if (nodes.is_number_integer()) {
    config.num_nodes = nodes.get<int>();
    return;
  }
  if (!nodes.is_array()) throw ConfigError("nodes: expected a node count or an array of nodes");
  config.num_nodes = static_cast<int>(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ObjectReader node(nodes[i], indexed("nodes", i));
    const int id = as_node(node.raw("id"), node.field("id"));
    if (id < 1 || id > config.num_nodes) {
      throw ConfigError(node.field("id") + ": ids must be 1.." + std::to_string(config.num_nodes));
    }
    const bool has_x = node.has("x");
    const bool has_y = node.has("y");
    if (has_x != has_y) throw ConfigError(indexed("nodes", i) + ": give both x and y or neither");
    if (has_x) {
      if (!config.positions.emplace(id, std::pair(node.number("x", 0), node.number("y", 0))).second) {
        throw ConfigError(node.field("id") + ": duplicate node id " + std::to_string(id));
      }
    }
    node.finish();
  }
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
  ScenarioConfig config;
  ObjectReader top(doc, "scenario");
  config.name = top.string("name", config.name);

  if (!top.has("nodes")) throw ConfigError("scenario.nodes: required");
  parse_nodes(top.raw("nodes"), config);

  if (!top.has("links")) throw ConfigError("scenario.links: required");
  const json& links = top.raw("links");
  if (!links.is_array()) throw ConfigError("links: expected an array");
  for (std::size_t i = 0; i < links.size(); ++i) {
    ObjectReader link(links[i], indexed("links", i));
    config.links.push_back({as_node(link.raw("from"), link.field("from")),
                            as_node(link.raw("to"), link.field("to"))});
    auto gain = link.optional_number("mean_gain");
    if (gain && *gain < 0.0) throw ConfigError(link.field("mean_gain") + ": must be >= 0");
    config.link_mean_gains.push_back(gain);
    link.finish();
  }

  if (!top.has("flows")) throw ConfigError("scenario.flows: required");
  const json& flows = top.raw("flows");
  if (!flows.is_array()) throw ConfigError("flows: expected an array");
  for (std::size_t i = 0; i < flows.size(); ++i) {
    ObjectReader reader(flows[i], indexed("flows", i));
    FlowSpec flow;
    const json& route = reader.raw("route");
    if (!route.is_array()) throw ConfigError(reader.field("route") + ": expected an array");
    for (std::size_t h = 0; h < route.size(); ++h) {
      flow.route.push_back(as_node(route[h], indexed(reader.field("route"), h)));
    }
    if (flow.route.size() < 2) throw ConfigError(reader.field("route") + ": needs at least two nodes");
    flow.name = reader.string("name", "F" + std::to_string(flow.route.back()));
    flow.arrival_rate = reader.number("arrival_rate", 0.0);
    flow.delay_target = reader.optional_number("delay_target");
    flow.weight_enabled = reader.boolean("weight_enabled", true);
    reader.finish();
    config.flows.push_back(std::move(flow));
  }

  if (top.has("channel")) {
    ObjectReader channel(top.raw("channel"), "channel");
    config.channel.sigma2 = channel.number("sigma2", config.channel.sigma2);
    config.channel.truncation_factor =
        channel.number("gamma_truncation_factor", config.channel.truncation_factor);
    config.channel.model = parse_gain_model(channel.string("gain_model", "power"));
    config.channel.seed = channel.seed("channel_seed", config.channel.seed);
    config.gain_scale = channel.number("gain_scale", config.gain_scale);
    channel.finish();
  }
  if (top.has("arrivals")) {
    ObjectReader arrivals(top.raw("arrivals"), "arrivals");
    config.arrival_seed = arrivals.seed("arrival_seed", config.arrival_seed);
    arrivals.finish();
  }
  if (top.has("review")) {
    ObjectReader review(top.raw("review"), "review");
    config.k0 = review.number("k0", config.k0);
    review.finish();
  }
  if (top.has("solver")) {
    ObjectReader solver(top.raw("solver"), "solver");
    config.solver.alpha = solver.number("alpha", config.solver.alpha);
    config.solver.cycles = static_cast<int>(solver.integer("cycles", config.solver.cycles));
    config.solver.n_rep = static_cast<int>(solver.integer("n_rep", config.solver.n_rep));
    config.solver.tolerance = solver.number("tolerance", config.solver.tolerance);
    config.solver.projection = parse_projection(solver.string("projection", "closed_form"));
    solver.finish();
  }
  if (top.has("weights")) {
    ObjectReader weights(top.raw("weights"), "weights");
    config.weights.a1 = weights.number("a1", config.weights.a1);
    config.weights.a2 = weights.number("a2", config.weights.a2);
    weights.finish();
  }
  if (top.has("run")) {
    ObjectReader run(top.raw("run"), "run");
    config.mode = parse_mode(run.string("mode", "qwdr"));
    config.horizon = run.integer("horizon_slots", config.horizon);
    config.replications = non_negative(run.integer("replications", 5), run.field("replications"));
    config.queue_sample_interval =
        run.integer("queue_sample_interval", config.queue_sample_interval);
    config.trace_schedule = run.boolean("trace_schedule", false);
    config.solver_trace_reviews =
        non_negative(run.integer("solver_trace_reviews", 0), run.field("solver_trace_reviews"));
    run.finish();
  }
  if (top.has("capacity")) {
    ObjectReader capacity(top.raw("capacity"), "capacity");
    config.capacity.channel_samples = non_negative(
        capacity.integer("channel_samples", 200), capacity.field("channel_samples"));
    config.capacity.tolerance = capacity.number("tolerance", config.capacity.tolerance);
    config.capacity.integer_service = capacity.boolean("integer_service", true);
    config.capacity.max_activation_sets = non_negative(
        capacity.integer("max_activation_sets", 500000), capacity.field("max_activation_sets"));
    capacity.finish();
  }
  if (top.has("metadata")) config.metadata = top.raw("metadata");
  top.finish();

  if (config.weights.a1 < 0.0) throw ConfigError("weights.a1: must be >= 0");
  if (!(config.weights.a2 > 0.0)) throw ConfigError("weights.a2: must be > 0");
  if (config.k0 < 0.0) throw ConfigError("review.k0: must be >= 0");
  if (config.horizon < 0) throw ConfigError("run.horizon_slots: must be >= 0");
  if (config.replications < 1) throw ConfigError("run.replications: must be >= 1");
  if (config.queue_sample_interval < 1) {
    throw ConfigError("run.queue_sample_interval: must be >= 1");
  }
  if (config.capacity.channel_samples < 1) {
    throw ConfigError("capacity.channel_samples: must be >= 1");
  }
  validate(config.solver);
  set_mode(config, config.mode);

  // Network and channel checks, including route-through-missing-link.
  const NetworkModel network = build_network(config);
  build_channel(config, network, config.channel.seed);
  return config;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const ScenarioConfig& config) {
  json doc;
  doc["name"] = config.name;
  if (config.positions.empty()) {
    doc["nodes"] = config.num_nodes;
  } else {
    json nodes = json::array();
    for (NodeId n = 1; n <= config.num_nodes; ++n) {
      json node = {{"id", n}};
      if (auto it = config.positions.find(n); it != config.positions.end()) {
        node["x"] = it->second.first;
        node["y"] = it->second.second;
      }
      nodes.push_back(node);
    }
    doc["nodes"] = nodes;
  }
  json links = json::array();
  for (std::size_t l = 0; l < config.links.size(); ++l) {
    json link = {{"from", config.links[l].from}, {"to", config.links[l].to}};
    if (config.link_mean_gains[l]) link["mean_gain"] = *config.link_mean_gains[l];
    links.push_back(link);
  }
  doc["links"] = links;
  json flows = json::array();
  for (const FlowSpec& flow : config.flows) {
    json f = {{"name", flow.name},
              {"route", flow.route},
              {"arrival_rate", flow.arrival_rate},
              {"weight_enabled", flow.weight_enabled}};
    f["delay_target"] = flow.delay_target ? json(*flow.delay_target) : json(nullptr);
    flows.push_back(f);
  }
  doc["flows"] = flows;
  doc["channel"] = {{"sigma2", config.channel.sigma2},
                    {"gamma_truncation_factor", config.channel.truncation_factor},
                    {"gain_model", to_string(config.channel.model)},
                    {"gain_scale", config.gain_scale},
                    {"channel_seed", config.channel.seed}};
  doc["arrivals"] = {{"arrival_seed", config.arrival_seed}};
  doc["review"] = {{"k0", config.k0}};
  doc["solver"] = {{"alpha", config.solver.alpha},
                   {"cycles", config.solver.cycles},
                   {"n_rep", config.solver.n_rep},
                   {"tolerance", config.solver.tolerance},
                   {"projection", to_string(config.solver.projection)}};
  doc["weights"] = {{"a1", config.weights.a1}, {"a2", config.weights.a2}};
  doc["run"] = {{"mode", to_string(config.mode)},
                {"horizon_slots", config.horizon},
                {"replications", config.replications},
                {"queue_sample_interval", config.queue_sample_interval},
                {"trace_schedule", config.trace_schedule},
                {"solver_trace_reviews", config.solver_trace_reviews}};
  doc["capacity"] = {{"channel_samples", config.capacity.channel_samples},
                     {"tolerance", config.capacity.tolerance},
                     {"integer_service", config.capacity.integer_service},
                     {"max_activation_sets", config.capacity.max_activation_sets}};
  doc["metadata"] = config.metadata;
  return doc;
}

void set_mode(ScenarioConfig& config, Mode mode) {
  config.mode = mode;
  if (mode == Mode::kUnweighted) config.weights.a1 = 0.0;
}

NetworkModel build_network(const ScenarioConfig& config) {
  return NetworkModel(config.num_nodes, config.links, config.flows);
}

ChannelModel build_channel(const ScenarioConfig& config, const NetworkModel& network,
                           std::uint64_t seed) {
  std::vector<double> gains(network.links().size(), 0.0);
  const bool need_geometry = std::any_of(config.link_mean_gains.begin(),
                                         config.link_mean_gains.end(),
                                         [](const auto& g) { return !g.has_value(); });
  std::vector<double> geometric;
  if (need_geometry) {
    // Only links lacking an explicit gain need coordinates.
    std::map<NodeId, std::pair<double, double>> positions = config.positions;
    for (std::size_t l = 0; l < config.links.size(); ++l) {
      if (config.link_mean_gains[l]) continue;
      for (NodeId n : {config.links[l].from, config.links[l].to}) {
        if (!positions.contains(n)) {
          throw ConfigError(indexed("links", l) + ": no mean_gain and node " + std::to_string(n) +
                            " has no coordinates");
        }
      }
    }
    for (std::size_t l = 0; l < config.links.size(); ++l) {
      if (config.link_mean_gains[l]) continue;
      const auto& a = positions.at(config.links[l].from);
      const auto& b = positions.at(config.links[l].to);
      const double d2 = (a.first - b.first) * (a.first - b.first) +
                        (a.second - b.second) * (a.second - b.second);
      if (!(d2 > 0.0)) throw ConfigError(indexed("links", l) + ": endpoints share coordinates");
      gains[l] = config.gain_scale / d2;
    }
  }
  for (std::size_t l = 0; l < config.links.size(); ++l) {
    if (config.link_mean_gains[l]) gains[l] = *config.link_mean_gains[l];
  }
  ChannelParams params = config.channel;
  params.seed = seed;
  return ChannelModel(std::move(gains), params);
}

RunOptions build_run_options(const ScenarioConfig& config) {
  RunOptions options;
  options.horizon = config.horizon;
  options.k0 = config.k0;
  options.solver = config.solver;
  options.weights = config.weights;
  options.mode = config.mode;
  options.queue_sample_interval = config.queue_sample_interval;
  options.trace_schedule = config.trace_schedule;
  options.solver_trace_reviews = config.solver_trace_reviews;
  return options;
}

std::uint64_t channel_seed(const ScenarioConfig& config, std::size_t replication) {
  return config.channel.seed + replication;
}

std::uint64_t arrival_seed(const ScenarioConfig& config, std::size_t replication) {
  return config.arrival_seed + replication;
}

ScenarioConfig make_paper15_scenario(std::uint64_t seed, int row) {
  if (row < 1 || row > kPaper15Rows) {
    throw ConfigError("paper15: row must be in 1.." + std::to_string(kPaper15Rows));
  }
  ScenarioConfig config;
  config.name = "paper15-row" + std::to_string(row);
  config.num_nodes = 15;

  // Layout digitized from a drawing in a 4.3 x 3.6 frame, scaled by 1/4.3
  // into the unit square.
  constexpr std::pair<double, double> kLayout[15] = {
      {3.2, 3.6}, {2.4, 2.0},  {3.2, 2.0},  {2.4, 1.2}, {4.3, 1.8},
      {3.44, 1.0}, {1.2, 3.6}, {1.6, 2.8},  {0.4, 2.8}, {0.04, 1.4},
      {2.04, 0.4}, {2.8, 0.6}, {0.4, 0.8},  {4.3, 0.8}, {3.8, 0.4}};
  constexpr double kFrame = 4.3;
  for (int n = 1; n <= 15; ++n) {
    const auto& [x, y] = kLayout[n - 1];
    config.positions[n] = {x / kFrame, y / kFrame};
  }

  constexpr std::pair<int, int> kEdges[] = {
      {1, 2},  {1, 5},  {3, 5},   {4, 2},  {11, 4},  {11, 12}, {10, 13},
      {9, 10}, {7, 9},  {7, 8},   {8, 2},  {3, 6},   {6, 12},  {5, 14},
      {5, 6},  {9, 4},  {3, 4},   {14, 15}, {12, 15}, {13, 11}, {3, 1}};
  for (const auto& [a, b] : kEdges) {
    config.links.push_back({a, b});
    config.links.push_back({b, a});
  }
  config.link_mean_gains.assign(config.links.size(), std::nullopt);

  struct Preset {
    const char* name;
    std::vector<NodeId> route;
    double rate;
  };
  const Preset presets[] = {
      {"F10", {7, 9, 10}, 3.74},     {"F4", {7, 8, 2, 4}, 2.5}, {"F11", {1, 2, 4, 11}, 2.5},
      {"F13", {9, 10, 13}, 2.5},     {"F12", {1, 3, 6, 12}, 2.5}, {"F15", {5, 14, 15}, 2.5},
      {"F6", {5, 3, 6}, 3.8}};
  for (const Preset& p : presets) {
    FlowSpec flow;
    flow.name = p.name;
    flow.route = p.route;
    flow.arrival_rate = p.rate;
    config.flows.push_back(std::move(flow));
  }
  if (row >= 2) {
    const auto& targets = kPaper15Targets[row - 2];
    const std::pair<const char*, double> targeted[] = {
        {"F10", targets[0]}, {"F11", targets[1]}, {"F6", targets[2]}};
    for (const auto& [name, target] : targeted) {
      for (FlowSpec& flow : config.flows) {
        if (flow.name == name) flow.delay_target = target;
      }
    }
  }

  config.channel.model = GainModel::kPower;
  config.channel.sigma2 = 2.4e-5;
  config.channel.truncation_factor = 10.0;
  config.channel.seed = seed;
  config.arrival_seed = seed + 1000;
  config.gain_scale = 1.0;
  config.k0 = 0.01;
  config.solver = SolverConfig{};
  config.solver.alpha = 1e-4;
  config.solver.cycles = 15;
  config.weights = WeightConfig{0.2, 2.0};
  config.horizon = 100000;
  config.replications = 5;
  config.metadata = {{"preset", "paper15"},
                     {"row", row},
                     {"coordinates", "approximate: digitized from a drawing"},
                     {"sigma2", "calibration choice; not a reference value"}};
  json reference = json::object();
  for (const auto& [name, delay] : paper15_reference_delays()) reference[name] = delay;
  config.metadata["reference_unweighted_delays"] = reference;
  return config;
}

std::vector<std::pair<std::string, double>> paper15_reference_delays() {
  return {{"F10", 318}, {"F4", 68}, {"F11", 499}, {"F13", 233},
          {"F12", 642}, {"F15", 25}, {"F6", 111}};
}

}  // namespace qwdr
