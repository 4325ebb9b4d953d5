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

#ifndef QWDR_SCHEDULE_HPP_
#define QWDR_SCHEDULE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "qwdr/network.hpp"
#include "qwdr/queues.hpp"

namespace qwdr {

// ceil(max(1, log(1 + k0 ||Q||))) slots.
Slot next_review_period(PacketCount total_queue, double k0);

// Review instants: the current period is [start, next).
struct ReviewClock {
  double k0 = 0.01;
  Slot start = 0;
  Slot next = 0;

  bool due(Slot t) const { return t >= next; }
  void advance(Slot t, PacketCount total_queue) {
    start = t;
    next = t + next_review_period(total_queue, k0);
  }
};

// Binary activations for every slot of one review period.
class SlotSchedule {
 public:
  SlotSchedule() = default;
  SlotSchedule(Slot start, Slot length, std::size_t num_elements);

  Slot start() const { return start_; }
  Slot length() const { return length_; }
  Slot end() const { return start_ + length_; }

  // Elements active in absolute slot t, in index order.
  const std::vector<std::size_t>& active(Slot t) const;
  bool is_active(std::size_t k, Slot t) const;
  Slot assigned_slots(std::size_t k) const { return assigned_[k]; }

  void activate(std::size_t k, Slot t);

 private:
  Slot start_ = 0;
  Slot length_ = 0;
  std::vector<std::vector<std::size_t>> active_;
  std::vector<Slot> assigned_;
};

// Greedy pass over elements in index order (node by node, then link, then
// flow). Element k takes slot t when neither endpoint is already busy in t
// and its running count is still below s(k) * length. Throws
// std::invalid_argument for an infeasible allocation.
SlotSchedule create_schedule(std::span<const double> allocation, const NetworkModel& model,
                             Slot start, Slot length);

}  // namespace qwdr

#endif  // QWDR_SCHEDULE_HPP_
