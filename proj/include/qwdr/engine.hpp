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

#ifndef QWDR_ENGINE_HPP_
#define QWDR_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qwdr/arrivals.hpp"
#include "qwdr/channel.hpp"
#include "qwdr/network.hpp"
#include "qwdr/queues.hpp"
#include "qwdr/schedule.hpp"
#include "qwdr/solver.hpp"

namespace qwdr {

enum class Mode {
  kQwdr,
  kUnweighted,  // QWDR with a1 = 0, i.e. w == 1 for every flow
};

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

struct RunOptions {
  Slot horizon = 100000;
  double k0 = 0.01;
  SolverConfig solver;
  WeightConfig weights;
  Mode mode = Mode::kQwdr;
  Slot queue_sample_interval = 100;
  bool trace_schedule = false;
  // Objective trajectories are recorded for the first this-many reviews.
  std::size_t solver_trace_reviews = 0;
  // Throw InvariantViolation at the first broken invariant instead of
  // counting it.
  bool strict_invariants = true;
};

// Cumulative S_ij^f per element, A_i^f per flow (at its source) and the FIFO
// bookkeeping needed to audit queue evolution.
struct ServiceLog {
  std::vector<PacketCount> transferred;
  std::vector<PacketCount> arrived;
  std::vector<PacketCount> delivered;
  std::vector<std::vector<Slot>> last_departure;  // [flow][hop]
  std::int64_t fifo_violations = 0;

  explicit ServiceLog(const NetworkModel& model);
};

struct DeliveryRecord {
  std::size_t flow = 0;
  Slot arrival_slot = 0;
  Slot delivery_slot = 0;

  Slot delay() const { return delivery_slot - arrival_slot; }
};

// One slot of queue dynamics. Every active element moves
// min(Q_i^f, floor(mu_ij)) head-of-line packets out of the start-of-slot
// queue; relayed packets and this slot's exogenous arrivals are enqueued at
// the end of the slot, so a packet spends at least one slot per hop.
void step_slot(QueueMatrix& queues, const NetworkModel& model, const SlotSchedule& schedule,
               const ChannelState& channel, std::span<const PacketCount> arrivals, Slot t,
               ServiceLog& log, std::vector<DeliveryRecord>& deliveries);

struct InvariantCounters {
  std::int64_t interference = 0;  // node with two active incident elements
  std::int64_t ledger = 0;        // queue-balance identity broken
  std::int64_t conservation = 0;  // injected != queued + delivered
  std::int64_t abstention = 0;    // zero-backlog element scheduled
  std::int64_t fifo = 0;

  std::int64_t total() const { return interference + ledger + conservation + abstention + fifo; }
};

struct ReviewRecord {
  std::size_t index = 0;
  Slot start = 0;
  Slot end = 0;
  PacketCount total_queue = 0;
};

struct ScheduleTraceRow {
  Slot slot = 0;
  NodeId from = 0;
  NodeId to = 0;
  NodeId flow_id = 0;
};

struct ObjectiveTraceRow {
  std::size_t review = 0;
  std::size_t step = 0;
  double objective = 0.0;
};

struct QueueSample {
  Slot slot = 0;
  PacketCount total = 0;
  std::vector<PacketCount> per_flow;
};

struct FlowTally {
  PacketCount arrived = 0;
  PacketCount delivered = 0;
  PacketCount delivered_second_half = 0;
  std::int64_t delay_sum = 0;
  std::map<Slot, PacketCount> delay_histogram;
};

struct RunResult {
  Slot horizon = 0;
  std::vector<FlowTally> flows;
  // ||Q|| at the end of every slot.
  std::vector<PacketCount> total_queue;
  std::vector<QueueSample> queue_samples;
  std::vector<ReviewRecord> reviews;
  std::vector<ScheduleTraceRow> schedule_trace;
  std::vector<ObjectiveTraceRow> objective_trace;
  InvariantCounters invariants;
};

// Queue-Weighted Discrete Review: at each review instant solve the weighted
// allocation, lay it out as a slot schedule, then run slots until the next
// review. Deterministic given the channel and arrival seeds.
class Simulation {
 public:
  Simulation(NetworkModel model, ChannelModel channel, ArrivalProcess arrivals,
             RunOptions options);

  RunResult run();

 private:
  void review(Slot t);
  void check_slot(Slot t);
  void fail(const std::string& what);

  NetworkModel model_;
  ChannelModel channel_;
  ArrivalProcess arrivals_;
  RunOptions options_;
  ConstraintGeometry geometry_;
  std::vector<std::optional<double>> thresholds_;
  std::vector<std::vector<std::size_t>> hop_elements_;  // [flow][hop]

  QueueMatrix queues_;
  ServiceLog log_;
  ReviewClock clock_;
  ChannelState channel_state_;
  SlotSchedule schedule_;
  std::vector<PacketCount> review_backlogs_;
  std::size_t review_index_ = 0;
  RunResult result_;
};

RunResult run(const NetworkModel& model, const ChannelModel& channel,
              const ArrivalProcess& arrivals, const RunOptions& options);

}  // namespace qwdr

#endif  // QWDR_ENGINE_HPP_
