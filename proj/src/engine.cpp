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

#include "qwdr/engine.hpp"

#include <algorithm>
#include <cmath>

#include "qwdr/errors.hpp"

namespace qwdr {

Mode parse_mode(const std::string& name) {
  if (name == "qwdr") return Mode::kQwdr;
  if (name == "unweighted") return Mode::kUnweighted;
  throw ConfigError("run.mode: expected \"qwdr\" or \"unweighted\", got \"" + name + "\"");
}

std::string to_string(Mode mode) { return mode == Mode::kQwdr ? "qwdr" : "unweighted"; }

ServiceLog::ServiceLog(const NetworkModel& model)
    : transferred(model.num_elements(), 0),
      arrived(model.flows().size(), 0),
      delivered(model.flows().size(), 0) {
  for (const FlowSpec& flow : model.flows()) {
    last_departure.emplace_back(flow.hops(), Slot{-1});
  }
}

void step_slot(QueueMatrix& queues, const NetworkModel& model, const SlotSchedule& schedule,
               const ChannelState& channel, std::span<const PacketCount> arrivals, Slot t,
               ServiceLog& log, std::vector<DeliveryRecord>& deliveries) {
  struct Relay {
    std::size_t flow;
    std::size_t hop;
    Packet packet;
  };
  std::vector<Relay> relayed;
  for (std::size_t k : schedule.active(t)) {
    const LinkFlow& e = model.element(k);
    const double rate = channel.rates[model.element_link(k)];
    const auto capacity = static_cast<PacketCount>(std::floor(std::max(rate, 0.0)));
    auto& queue = queues.queue(e.flow, e.hop);
    const PacketCount n = std::min<PacketCount>(static_cast<PacketCount>(queue.size()), capacity);
    const bool last_hop = e.hop + 1 == model.flow(e.flow).hops();
    Slot& last = log.last_departure[e.flow][e.hop];
    for (PacketCount p = 0; p < n; ++p) {
      const Packet packet = queue.front();
      queue.pop_front();
      if (packet.arrival_slot < last) ++log.fifo_violations;
      last = packet.arrival_slot;
      if (last_hop) {
        deliveries.push_back({e.flow, packet.arrival_slot, t});
        ++log.delivered[e.flow];
      } else {
        relayed.push_back({e.flow, e.hop + 1, packet});
      }
    }
    log.transferred[k] += n;
  }
  for (const Relay& r : relayed) queues.queue(r.flow, r.hop).push_back(r.packet);
  for (std::size_t f = 0; f < arrivals.size(); ++f) {
    auto& source = queues.queue(f, 0);
    for (PacketCount a = 0; a < arrivals[f]; ++a) source.push_back({t});
    log.arrived[f] += arrivals[f];
  }
}

Simulation::Simulation(NetworkModel model, ChannelModel channel, ArrivalProcess arrivals,
                       RunOptions options)
    : model_(std::move(model)),
      channel_(std::move(channel)),
      arrivals_(std::move(arrivals)),
      options_(options),
      geometry_(build_constraint_geometry(model_)),
      thresholds_(weight_thresholds(model_)),
      queues_(model_),
      log_(model_) {
  validate(options_.solver);
  if (options_.horizon < 0) throw ConfigError("run.horizon_slots: must be >= 0");
  if (!(options_.k0 >= 0.0)) throw ConfigError("review.k0: must be >= 0");
  if (options_.queue_sample_interval < 1) {
    throw ConfigError("run.queue_sample_interval: must be >= 1");
  }
  if (channel_.num_links() != model_.links().size()) {
    throw ConfigError("channel: one mean gain per link required");
  }
  if (arrivals_.rates().size() != model_.flows().size()) {
    throw ConfigError("arrivals: one rate per flow required");
  }
  if (options_.mode == Mode::kUnweighted) options_.weights.a1 = 0.0;
  clock_.k0 = options_.k0;
  hop_elements_.resize(model_.flows().size());
  for (std::size_t f = 0; f < model_.flows().size(); ++f) {
    hop_elements_[f].resize(model_.flow(f).hops());
  }
  for (std::size_t k = 0; k < model_.num_elements(); ++k) {
    const LinkFlow& e = model_.element(k);
    hop_elements_[e.flow][e.hop] = k;
  }
}

void Simulation::fail(const std::string& what) {
  if (options_.strict_invariants) throw InvariantViolation(what);
}

void Simulation::review(Slot t) {
  const PacketCount total = queues_.total();
  clock_.advance(t, total);
  channel_state_ = draw_channel(channel_, review_index_);
  const ReviewProblem problem =
      make_review_problem(model_, queues_, channel_state_, options_.weights, thresholds_);
  review_backlogs_ = problem.backlogs;

  StepObserver observer;
  if (review_index_ < options_.solver_trace_reviews) {
    observer = [this](std::size_t step, double value) {
      result_.objective_trace.push_back({review_index_, step, value});
    };
  }
  const AllocationVector allocation = solve_allocation(problem, geometry_, options_.solver, observer);
  schedule_ = create_schedule(allocation, model_, t, clock_.next - t);
  result_.reviews.push_back({review_index_, t, clock_.next, total});
  ++review_index_;
}

void Simulation::check_slot(Slot t) {
  const auto& active = schedule_.active(t);
  if (auto node = find_interference_conflict(model_, active)) {
    ++result_.invariants.interference;
    fail("slot " + std::to_string(t) + ": node " + std::to_string(*node) +
         " has two active incident elements");
  }
  for (std::size_t k : active) {
    if (review_backlogs_[k] == 0) {
      ++result_.invariants.abstention;
      fail("slot " + std::to_string(t) + ": element " + std::to_string(k) +
           " scheduled with zero review-time backlog");
    }
  }

  PacketCount injected = 0;
  PacketCount delivered = 0;
  for (std::size_t f = 0; f < hop_elements_.size(); ++f) {
    injected += log_.arrived[f];
    delivered += log_.delivered[f];
    for (std::size_t h = 0; h < hop_elements_[f].size(); ++h) {
      PacketCount expected = -log_.transferred[hop_elements_[f][h]];
      expected += h == 0 ? log_.arrived[f] : log_.transferred[hop_elements_[f][h - 1]];
      if (expected != queues_.length_at(f, h)) {
        ++result_.invariants.ledger;
        fail("slot " + std::to_string(t) + ": queue balance broken for flow " +
             std::to_string(model_.flow(f).id()) + " at hop " + std::to_string(h));
      }
    }
  }
  if (injected != queues_.total() + delivered) {
    ++result_.invariants.conservation;
    fail("slot " + std::to_string(t) + ": packet conservation broken");
  }
  if (log_.fifo_violations != result_.invariants.fifo) {
    result_.invariants.fifo = log_.fifo_violations;
    fail("slot " + std::to_string(t) + ": FIFO order broken");
  }
}

RunResult Simulation::run() {
  queues_ = QueueMatrix(model_);
  log_ = ServiceLog(model_);
  clock_ = ReviewClock{options_.k0, 0, 0};
  schedule_ = SlotSchedule{};
  review_index_ = 0;
  result_ = RunResult{};
  result_.horizon = options_.horizon;
  result_.flows.resize(model_.flows().size());
  result_.total_queue.reserve(static_cast<std::size_t>(options_.horizon));
  const Slot second_half = options_.horizon / 2;

  std::vector<DeliveryRecord> deliveries;
  for (Slot t = 0; t < options_.horizon; ++t) {
    if (clock_.due(t)) review(t);
    const std::vector<PacketCount> arrivals = draw_arrivals(arrivals_, t);
    deliveries.clear();
    step_slot(queues_, model_, schedule_, channel_state_, arrivals, t, log_, deliveries);

    for (std::size_t f = 0; f < arrivals.size(); ++f) result_.flows[f].arrived += arrivals[f];
    for (const DeliveryRecord& d : deliveries) {
      FlowTally& tally = result_.flows[d.flow];
      ++tally.delivered;
      tally.delay_sum += d.delay();
      ++tally.delay_histogram[d.delay()];
      if (d.delivery_slot >= second_half) ++tally.delivered_second_half;
    }
    if (options_.trace_schedule) {
      for (std::size_t k : schedule_.active(t)) {
        const LinkFlow& e = model_.element(k);
        result_.schedule_trace.push_back({t, e.from, e.to, e.flow_id});
      }
    }
    check_slot(t);

    result_.total_queue.push_back(queues_.total());
    if ((t + 1) % options_.queue_sample_interval == 0) {
      QueueSample sample{t + 1, result_.total_queue.back(), {}};
      for (std::size_t f = 0; f < model_.flows().size(); ++f) {
        sample.per_flow.push_back(queues_.flow_backlog(f));
      }
      result_.queue_samples.push_back(std::move(sample));
    }
  }
  return result_;
}

RunResult run(const NetworkModel& model, const ChannelModel& channel,
              const ArrivalProcess& arrivals, const RunOptions& options) {
  return Simulation(model, channel, arrivals, options).run();
}

}  // namespace qwdr
