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

#include "qwdr/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qwdr {

namespace {

// Keeps s * T from admitting an extra slot through round-off, e.g.
// 0.3 * 10 = 3.0000000000000004.
constexpr double kQuotaSlack = 1e-9;
constexpr double kFeasibilitySlack = 1e-9;

}  // namespace

Slot next_review_period(PacketCount total_queue, double k0) {
  const double raw = std::log1p(k0 * static_cast<double>(total_queue));
  return static_cast<Slot>(std::ceil(std::max(1.0, raw)));
}

SlotSchedule::SlotSchedule(Slot start, Slot length, std::size_t num_elements)
    : start_(start),
      length_(length),
      active_(static_cast<std::size_t>(length)),
      assigned_(num_elements, 0) {}

const std::vector<std::size_t>& SlotSchedule::active(Slot t) const {
  return active_.at(static_cast<std::size_t>(t - start_));
}

bool SlotSchedule::is_active(std::size_t k, Slot t) const {
  const auto& slot = active(t);
  return std::binary_search(slot.begin(), slot.end(), k);
}

void SlotSchedule::activate(std::size_t k, Slot t) {
  auto& slot = active_.at(static_cast<std::size_t>(t - start_));
  slot.insert(std::upper_bound(slot.begin(), slot.end(), k), k);
  ++assigned_[k];
}

SlotSchedule create_schedule(std::span<const double> allocation, const NetworkModel& model,
                             Slot start, Slot length) {
  if (allocation.size() != model.num_elements()) {
    throw std::invalid_argument("allocation has " + std::to_string(allocation.size()) +
                                " entries, expected " + std::to_string(model.num_elements()));
  }
  if (length < 1) throw std::invalid_argument("review period must be at least one slot");
  for (std::size_t k = 0; k < allocation.size(); ++k) {
    if (!(allocation[k] >= 0.0)) {
      throw std::invalid_argument("allocation[" + std::to_string(k) + "] is negative");
    }
  }
  for (NodeId n = 1; n <= model.num_nodes(); ++n) {
    double sum = 0.0;
    for (std::size_t k : model.incident_elements(n)) sum += allocation[k];
    if (sum > 1.0 + kFeasibilitySlack) {
      throw std::invalid_argument("allocation violates the interference constraint at node " +
                                  std::to_string(n));
    }
  }

  SlotSchedule schedule(start, length, model.num_elements());
  const auto slots = static_cast<std::size_t>(length);
  const auto nodes = static_cast<std::size_t>(model.num_nodes()) + 1;
  std::vector<char> busy(slots * nodes, 0);
  for (std::size_t k = 0; k < allocation.size(); ++k) {
    const double quota = allocation[k] * static_cast<double>(length) - kQuotaSlack;
    if (quota <= 0.0) continue;
    const LinkFlow& e = model.element(k);
    const auto from = static_cast<std::size_t>(e.from);
    const auto to = static_cast<std::size_t>(e.to);
    Slot count = 0;
    for (std::size_t t = 0; t < slots && static_cast<double>(count) < quota; ++t) {
      if (busy[t * nodes + from] || busy[t * nodes + to]) continue;
      busy[t * nodes + from] = busy[t * nodes + to] = 1;
      schedule.activate(k, start + static_cast<Slot>(t));
      ++count;
    }
  }
  return schedule;
}

}  // namespace qwdr
