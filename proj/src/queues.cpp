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

#include "qwdr/queues.hpp"

#include <algorithm>

namespace qwdr {

QueueMatrix::QueueMatrix(const NetworkModel& model) {
  for (const FlowSpec& flow : model.flows()) {
    flow_ids_.push_back(flow.id());
    routes_.push_back(flow.route);
    queues_.emplace_back(flow.hops());
  }
}

PacketCount QueueMatrix::length(NodeId node, NodeId flow_id) const {
  for (std::size_t f = 0; f < flow_ids_.size(); ++f) {
    if (flow_ids_[f] != flow_id) continue;
    const auto& route = routes_[f];
    for (std::size_t h = 0; h + 1 < route.size(); ++h) {
      if (route[h] == node) return length_at(f, h);
    }
    return 0;
  }
  return 0;
}

PacketCount QueueMatrix::length_at(std::size_t flow, std::size_t hop) const {
  if (hop >= queues_[flow].size()) return 0;
  return static_cast<PacketCount>(queues_[flow][hop].size());
}

PacketCount QueueMatrix::flow_backlog(std::size_t flow) const {
  PacketCount sum = 0;
  for (const auto& q : queues_[flow]) sum += static_cast<PacketCount>(q.size());
  return sum;
}

PacketCount QueueMatrix::total() const {
  PacketCount sum = 0;
  for (std::size_t f = 0; f < queues_.size(); ++f) sum += flow_backlog(f);
  return sum;
}

PacketCount differential_backlog(const QueueMatrix& queues, const LinkFlow& element) {
  const PacketCount upstream = queues.length_at(element.flow, element.hop);
  const PacketCount downstream = queues.length_at(element.flow, element.hop + 1);
  return std::max<PacketCount>(upstream - downstream, 0);
}

PacketCount differential_backlog(const QueueMatrix& queues, const NetworkModel& model, NodeId i,
                                 NodeId j, NodeId f) {
  return differential_backlog(queues, model.element(model.elements().at(i, j, f)));
}

std::vector<PacketCount> differential_backlogs(const QueueMatrix& queues,
                                               const NetworkModel& model) {
  std::vector<PacketCount> out;
  out.reserve(model.num_elements());
  for (const LinkFlow& e : model.elements().elements()) out.push_back(differential_backlog(queues, e));
  return out;
}

}  // namespace qwdr
