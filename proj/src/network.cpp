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

#include "qwdr/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qwdr/errors.hpp"

namespace qwdr {

namespace {

std::string flow_field(std::size_t index, const char* field) {
  return "flows[" + std::to_string(index) + "]." + field;
}

}  // namespace

LinkFlowIndex::LinkFlowIndex(std::vector<LinkFlow> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end(),
            [](const LinkFlow& a, const LinkFlow& b) { return a.key() < b.key(); });
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const auto [it, inserted] = lookup_.emplace(elements_[k].key(), k);
    if (!inserted) {
      const auto& e = elements_[k];
      throw ConfigError("duplicate link-flow element (" + std::to_string(e.from) + "," +
                        std::to_string(e.to) + "," + std::to_string(e.flow_id) + ")");
    }
  }
}

std::optional<std::size_t> LinkFlowIndex::find(NodeId i, NodeId j, NodeId f) const {
  const auto it = lookup_.find({i, j, f});
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t LinkFlowIndex::at(NodeId i, NodeId j, NodeId f) const {
  if (auto k = find(i, j, f)) return *k;
  throw std::out_of_range("no link-flow element (" + std::to_string(i) + "," + std::to_string(j) +
                          "," + std::to_string(f) + ")");
}

std::vector<InterferenceSet> build_interference_sets(std::span<const Link> links) {
  std::map<NodeId, std::vector<Link>> by_node;
  for (const Link& link : links) {
    by_node[link.from].push_back(link);
    by_node[link.to].push_back(link);
  }
  std::vector<InterferenceSet> sets;
  sets.reserve(by_node.size());
  for (auto& [node, incident] : by_node) {
    std::sort(incident.begin(), incident.end());
    incident.erase(std::unique(incident.begin(), incident.end()), incident.end());
    sets.push_back({node, std::move(incident)});
  }
  return sets;
}

LinkFlowIndex build_link_flow_index(std::span<const FlowSpec> flows) {
  std::vector<LinkFlow> elements;
  for (std::size_t f = 0; f < flows.size(); ++f) {
    const auto& route = flows[f].route;
    for (std::size_t h = 0; h + 1 < route.size(); ++h) {
      elements.push_back({route[h], route[h + 1], flows[f].id(), f, h});
    }
  }
  return LinkFlowIndex(std::move(elements));
}

NetworkModel::NetworkModel(int num_nodes, std::vector<Link> links, std::vector<FlowSpec> flows)
    : num_nodes_(num_nodes), links_(std::move(links)), flows_(std::move(flows)) {
  if (num_nodes_ < 1) throw ConfigError("nodes: network needs at least one node");
  auto in_range = [this](NodeId n) { return n >= 1 && n <= num_nodes_; };

  for (std::size_t l = 0; l < links_.size(); ++l) {
    const Link& link = links_[l];
    const std::string field = "links[" + std::to_string(l) + "]";
    if (!in_range(link.from) || !in_range(link.to)) {
      throw ConfigError(field + ": endpoint outside 1.." + std::to_string(num_nodes_));
    }
    if (link.from == link.to) throw ConfigError(field + ": self-loop");
    if (!link_lookup_.emplace(link, l).second) {
      throw ConfigError(field + ": duplicate link " + std::to_string(link.from) + "->" +
                        std::to_string(link.to));
    }
  }

  std::set<NodeId> destinations;
  for (std::size_t f = 0; f < flows_.size(); ++f) {
    const FlowSpec& flow = flows_[f];
    const auto& route = flow.route;
    if (route.size() < 2) throw ConfigError(flow_field(f, "route") + ": needs at least two nodes");
    std::set<NodeId> seen;
    for (NodeId n : route) {
      if (!in_range(n)) {
        throw ConfigError(flow_field(f, "route") + ": node " + std::to_string(n) +
                          " outside 1.." + std::to_string(num_nodes_));
      }
      if (!seen.insert(n).second) {
        throw ConfigError(flow_field(f, "route") + ": node " + std::to_string(n) +
                          " repeats; routes must be simple paths");
      }
    }
    for (std::size_t h = 0; h + 1 < route.size(); ++h) {
      if (!link_lookup_.contains({route[h], route[h + 1]})) {
        throw ConfigError(flow_field(f, "route") + ": hop " + std::to_string(route[h]) + "->" +
                          std::to_string(route[h + 1]) + " is not a link");
      }
    }
    if (!std::isfinite(flow.arrival_rate) || flow.arrival_rate < 0.0) {
      throw ConfigError(flow_field(f, "arrival_rate") + ": must be a finite value >= 0");
    }
    if (flow.delay_target && !(*flow.delay_target > 0.0)) {
      throw ConfigError(flow_field(f, "delay_target") + ": must be > 0");
    }
    if (!destinations.insert(flow.destination()).second) {
      throw ConfigError(flow_field(f, "route") + ": another flow already ends at node " +
                        std::to_string(flow.destination()));
    }
  }

  interference_sets_ = build_interference_sets(links_);
  elements_ = build_link_flow_index(flows_);
  element_links_.reserve(elements_.size());
  incident_.assign(static_cast<std::size_t>(num_nodes_) + 1, {});
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const LinkFlow& e = elements_[k];
    element_links_.push_back(link_lookup_.at({e.from, e.to}));
    incident_[static_cast<std::size_t>(e.from)].push_back(k);
    incident_[static_cast<std::size_t>(e.to)].push_back(k);
  }
}

std::optional<std::size_t> NetworkModel::link_index(Link link) const {
  const auto it = link_lookup_.find(link);
  if (it == link_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t NetworkModel::flow_index(NodeId flow_id) const {
  for (std::size_t f = 0; f < flows_.size(); ++f) {
    if (flows_[f].id() == flow_id) return f;
  }
  throw std::out_of_range("no flow with destination " + std::to_string(flow_id));
}

std::optional<NodeId> find_interference_conflict(const NetworkModel& model,
                                                 std::span<const std::size_t> active) {
  std::vector<int> busy(static_cast<std::size_t>(model.num_nodes()) + 1, 0);
  for (std::size_t k : active) {
    const LinkFlow& e = model.element(k);
    for (NodeId n : {e.from, e.to}) {
      if (++busy[static_cast<std::size_t>(n)] > 1) return n;
    }
  }
  return std::nullopt;
}

}  // namespace qwdr
