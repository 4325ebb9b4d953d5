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

#ifndef QWDR_ARRIVALS_HPP_
#define QWDR_ARRIVALS_HPP_

#include <cstdint>
#include <vector>

#include "qwdr/network.hpp"
#include "qwdr/queues.hpp"

namespace qwdr {

// Per-slot Poisson exogenous arrivals, one independent stream per flow.
class ArrivalProcess {
 public:
  ArrivalProcess() = default;
  ArrivalProcess(std::vector<double> rates, std::uint64_t seed);
  ArrivalProcess(const NetworkModel& model, std::uint64_t seed);

  const std::vector<double>& rates() const { return rates_; }
  std::uint64_t seed() const { return seed_; }

  PacketCount draw(std::size_t flow, Slot slot) const;

 private:
  std::vector<double> rates_;
  std::uint64_t seed_ = 0;
};

// Counts per flow (at the flow's source) for one slot.
std::vector<PacketCount> draw_arrivals(const ArrivalProcess& process, Slot slot);

}  // namespace qwdr

#endif  // QWDR_ARRIVALS_HPP_
