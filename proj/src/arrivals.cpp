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

#include "qwdr/arrivals.hpp"

#include <random>

#include "qwdr/rng.hpp"

namespace qwdr {

ArrivalProcess::ArrivalProcess(std::vector<double> rates, std::uint64_t seed)
    : rates_(std::move(rates)), seed_(seed) {}

ArrivalProcess::ArrivalProcess(const NetworkModel& model, std::uint64_t seed) : seed_(seed) {
  for (const FlowSpec& flow : model.flows()) rates_.push_back(flow.arrival_rate);
}

PacketCount ArrivalProcess::draw(std::size_t flow, Slot slot) const {
  const double rate = rates_[flow];
  if (rate <= 0.0) return 0;
  StreamRng rng(seed_, StreamDomain::kArrivals, flow, static_cast<std::uint64_t>(slot));
  std::poisson_distribution<PacketCount> poisson(rate);
  return poisson(rng);
}

std::vector<PacketCount> draw_arrivals(const ArrivalProcess& process, Slot slot) {
  std::vector<PacketCount> counts(process.rates().size());
  for (std::size_t f = 0; f < counts.size(); ++f) counts[f] = process.draw(f, slot);
  return counts;
}

}  // namespace qwdr
