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

#ifndef QWDR_QUEUES_HPP_
#define QWDR_QUEUES_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "qwdr/network.hpp"

namespace qwdr {

using Slot = std::int64_t;
using PacketCount = std::int64_t;

struct Packet {
  Slot arrival_slot = 0;  // slot of exogenous arrival at the source
};

// Per (node, flow) FIFO queues along each flow's route. Destinations hold no
// queue: packets leave the network on arrival there. Q_ij^f, Q^f and ||Q||
// are always recomputed from the queues themselves.
class QueueMatrix {
 public:
  QueueMatrix() = default;
  explicit QueueMatrix(const NetworkModel& model);

  // Q_i^f; zero off the route and at the destination.
  PacketCount length(NodeId node, NodeId flow_id) const;
  PacketCount length_at(std::size_t flow, std::size_t hop) const;
  // Q^f, the network-wide backlog of one flow.
  PacketCount flow_backlog(std::size_t flow) const;
  // ||Q||.
  PacketCount total() const;

  std::deque<Packet>& queue(std::size_t flow, std::size_t hop) { return queues_[flow][hop]; }
  const std::deque<Packet>& queue(std::size_t flow, std::size_t hop) const {
    return queues_[flow][hop];
  }
  std::size_t num_flows() const { return queues_.size(); }
  std::size_t num_hops(std::size_t flow) const { return queues_[flow].size(); }

 private:
  std::vector<NodeId> flow_ids_;
  std::vector<std::vector<std::deque<Packet>>> queues_;  // [flow][hop], destination excluded
  std::vector<std::vector<NodeId>> routes_;
};

// max(Q_i^f - Q_j^f, 0) with the destination's backlog taken as zero.
// Throws std::out_of_range if (i, j, f) is not a link-flow element.
PacketCount differential_backlog(const QueueMatrix& queues, const NetworkModel& model, NodeId i,
                                 NodeId j, NodeId f);
PacketCount differential_backlog(const QueueMatrix& queues, const LinkFlow& element);

// Q_ij^f for every element, in index order.
std::vector<PacketCount> differential_backlogs(const QueueMatrix& queues,
                                               const NetworkModel& model);

}  // namespace qwdr

#endif  // QWDR_QUEUES_HPP_
