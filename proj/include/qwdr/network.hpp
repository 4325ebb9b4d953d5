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

#ifndef QWDR_NETWORK_HPP_
#define QWDR_NETWORK_HPP_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace qwdr {

// Nodes are numbered 1..N.
using NodeId = int;

struct Link {
  NodeId from = 0;
  NodeId to = 0;

  auto operator<=>(const Link&) const = default;
};

// All traffic destined to one node. The flow id is the destination node.
struct FlowSpec {
  std::string name;
  std::vector<NodeId> route;  // source first, destination last
  double arrival_rate = 0.0;  // packets per slot, injected at the source
  std::optional<double> delay_target;  // slots
  bool weight_enabled = true;

  NodeId source() const { return route.front(); }
  NodeId destination() const { return route.back(); }
  NodeId id() const { return route.back(); }
  std::size_t hops() const { return route.size() - 1; }
};

// Links that may not be active in the same slot: every link incident on
// `node`.
struct InterferenceSet {
  NodeId node = 0;
  std::vector<Link> links;
};

// One (i, j, f) triple: flow f crossing route hop i -> j.
struct LinkFlow {
  NodeId from = 0;
  NodeId to = 0;
  NodeId flow_id = 0;
  std::size_t flow = 0;  // position in the flow list
  std::size_t hop = 0;   // position of `from` on the route

  auto key() const { return std::tuple(from, to, flow_id); }
};

// The bijection between link-flow elements and 0..|K|-1, in lexicographic
// (i, j, f) order.
class LinkFlowIndex {
 public:
  LinkFlowIndex() = default;
  explicit LinkFlowIndex(std::vector<LinkFlow> elements);

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const LinkFlow& operator[](std::size_t k) const { return elements_[k]; }
  const std::vector<LinkFlow>& elements() const { return elements_; }

  std::optional<std::size_t> find(NodeId i, NodeId j, NodeId f) const;
  // Throws std::out_of_range for a triple outside K.
  std::size_t at(NodeId i, NodeId j, NodeId f) const;

 private:
  std::vector<LinkFlow> elements_;
  std::map<std::tuple<NodeId, NodeId, NodeId>, std::size_t> lookup_;
};

// One set per node holding every link incident on it; nodes without links
// are omitted. Sets come out ordered by node id.
std::vector<InterferenceSet> build_interference_sets(std::span<const Link> links);

// Enumerates consecutive route hops of every flow. Throws ConfigError on a
// duplicate (i, j, f).
LinkFlowIndex build_link_flow_index(std::span<const FlowSpec> flows);

// Static description of the network: graph, flows with fixed routes, the
// node-exclusive interference structure and the link-flow index K.
class NetworkModel {
 public:
  NetworkModel() = default;
  // Validates everything and throws ConfigError naming the offending field.
  NetworkModel(int num_nodes, std::vector<Link> links, std::vector<FlowSpec> flows);

  int num_nodes() const { return num_nodes_; }
  const std::vector<Link>& links() const { return links_; }
  std::optional<std::size_t> link_index(Link link) const;

  const std::vector<FlowSpec>& flows() const { return flows_; }
  const FlowSpec& flow(std::size_t index) const { return flows_[index]; }
  // Throws std::out_of_range when no flow has this destination.
  std::size_t flow_index(NodeId flow_id) const;

  const std::vector<InterferenceSet>& interference_sets() const { return interference_sets_; }

  const LinkFlowIndex& elements() const { return elements_; }
  std::size_t num_elements() const { return elements_.size(); }
  const LinkFlow& element(std::size_t k) const { return elements_[k]; }
  std::size_t element_link(std::size_t k) const { return element_links_[k]; }

  // Elements having `node` as an endpoint, in index order.
  const std::vector<std::size_t>& incident_elements(NodeId node) const {
    return incident_[static_cast<std::size_t>(node)];
  }

 private:
  int num_nodes_ = 0;
  std::vector<Link> links_;
  std::map<Link, std::size_t> link_lookup_;
  std::vector<FlowSpec> flows_;
  std::vector<InterferenceSet> interference_sets_;
  LinkFlowIndex elements_;
  std::vector<std::size_t> element_links_;
  std::vector<std::vector<std::size_t>> incident_;
};

// First node with more than one active incident element, if any.
std::optional<NodeId> find_interference_conflict(const NetworkModel& model,
                                                 std::span<const std::size_t> active);

}  // namespace qwdr

#endif  // QWDR_NETWORK_HPP_
