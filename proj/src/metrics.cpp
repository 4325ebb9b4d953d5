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

#include "qwdr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwdr/errors.hpp"

namespace qwdr {

using nlohmann::json;

std::int64_t round_delay(double delay) { return static_cast<std::int64_t>(std::llround(delay)); }

std::optional<std::int64_t> FlowMetrics::reported_delay() const {
  if (!mean_delay) return std::nullopt;
  return round_delay(*mean_delay);
}

const FlowMetrics& RunMetrics::flow(const std::string& name) const {
  for (const FlowMetrics& f : flows) {
    if (f.name == name) return f;
  }
  throw std::out_of_range("no flow named " + name);
}

RunMetrics collect_metrics(const RunResult& run, const NetworkModel& model) {
  RunMetrics metrics;
  metrics.horizon = run.horizon;
  metrics.reviews = run.reviews.size();
  metrics.invariants = run.invariants;
  const Slot late_slots = run.horizon - run.horizon / 2;
  for (std::size_t f = 0; f < model.flows().size(); ++f) {
    const FlowSpec& spec = model.flow(f);
    const FlowTally& tally = run.flows[f];
    FlowMetrics fm;
    fm.name = spec.name;
    fm.flow_id = spec.id();
    fm.arrival_rate = spec.arrival_rate;
    fm.delay_target = spec.delay_target;
    fm.arrived = tally.arrived;
    fm.delivered = tally.delivered;
    if (tally.delivered > 0) {
      fm.mean_delay = static_cast<double>(tally.delay_sum) / static_cast<double>(tally.delivered);
    }
    fm.delay_histogram = tally.delay_histogram;
    if (run.horizon > 0) {
      fm.throughput = static_cast<double>(tally.delivered) / static_cast<double>(run.horizon);
    }
    if (late_slots > 0) {
      fm.late_throughput =
          static_cast<double>(tally.delivered_second_half) / static_cast<double>(late_slots);
    }
    metrics.flows.push_back(std::move(fm));
  }
  if (!run.total_queue.empty()) {
    metrics.max_total_queue = *std::max_element(run.total_queue.begin(), run.total_queue.end());
    double sum = 0.0;
    for (PacketCount q : run.total_queue) sum += static_cast<double>(q);
    metrics.mean_total_queue = sum / static_cast<double>(run.total_queue.size());
  }
  return metrics;
}

RunMetrics aggregate_metrics(const std::vector<RunMetrics>& runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate_metrics: no runs");
  RunMetrics out = runs.front();
  out.replications = runs.size();
  const double n = static_cast<double>(runs.size());
  out.max_total_queue = 0;
  out.mean_total_queue = 0.0;
  out.reviews = 0;
  out.invariants = {};
  for (FlowMetrics& f : out.flows) {
    FlowMetrics fresh;
    fresh.name = f.name;
    fresh.flow_id = f.flow_id;
    fresh.arrival_rate = f.arrival_rate;
    fresh.delay_target = f.delay_target;
    f = std::move(fresh);
  }
  std::vector<double> delay_sums(out.flows.size(), 0.0);
  std::vector<int> delay_counts(out.flows.size(), 0);
  for (const RunMetrics& r : runs) {
    if (r.flows.size() != out.flows.size()) {
      throw ConfigError("aggregate_metrics: replications disagree on flows");
    }
    out.max_total_queue = std::max(out.max_total_queue, r.max_total_queue);
    out.mean_total_queue += r.mean_total_queue / n;
    out.reviews += r.reviews;
    out.invariants.interference += r.invariants.interference;
    out.invariants.ledger += r.invariants.ledger;
    out.invariants.conservation += r.invariants.conservation;
    out.invariants.abstention += r.invariants.abstention;
    out.invariants.fifo += r.invariants.fifo;
    for (std::size_t f = 0; f < out.flows.size(); ++f) {
      const FlowMetrics& src = r.flows[f];
      FlowMetrics& dst = out.flows[f];
      dst.arrived += src.arrived;
      dst.delivered += src.delivered;
      dst.throughput += src.throughput / n;
      dst.late_throughput += src.late_throughput / n;
      for (const auto& [delay, count] : src.delay_histogram) dst.delay_histogram[delay] += count;
      if (src.mean_delay) {
        delay_sums[f] += *src.mean_delay;
        ++delay_counts[f];
      }
    }
  }
  for (std::size_t f = 0; f < out.flows.size(); ++f) {
    if (delay_counts[f] > 0) out.flows[f].mean_delay = delay_sums[f] / delay_counts[f];
  }
  return out;
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const RunMetrics& metrics) {
  json flows = json::array();
  for (const FlowMetrics& f : metrics.flows) {
    json histogram = json::array();
    for (const auto& [delay, count] : f.delay_histogram) histogram.push_back({delay, count});
    json row = {{"name", f.name},
                {"flow_id", f.flow_id},
                {"arrival_rate", f.arrival_rate},
                {"delay_target", optional_json(f.delay_target)},
                {"arrived", f.arrived},
                {"delivered", f.delivered},
                {"mean_delay", optional_json(f.mean_delay)},
                {"throughput", f.throughput},
                {"late_throughput", f.late_throughput},
                {"delay_histogram", histogram}};
    const auto reported = f.reported_delay();
    row["reported_delay"] = reported ? json(*reported) : json(nullptr);
    flows.push_back(std::move(row));
  }
  return {{"scenario", metrics.scenario},
          {"mode", metrics.mode},
          {"horizon_slots", metrics.horizon},
          {"replications", metrics.replications},
          {"reviews", metrics.reviews},
          {"max_total_queue", metrics.max_total_queue},
          {"mean_total_queue", metrics.mean_total_queue},
          {"invariant_violations",
           {{"interference", metrics.invariants.interference},
            {"ledger", metrics.invariants.ledger},
            {"conservation", metrics.invariants.conservation},
            {"abstention", metrics.invariants.abstention},
            {"fifo", metrics.invariants.fifo}}},
          {"flows", flows},
          {"config", metrics.config}};
}

std::string dump_metrics(const RunMetrics& metrics) { return to_json(metrics).dump(2) + "\n"; }

std::string to_string(TargetStatus status) {
  switch (status) {
    case TargetStatus::kMet:
      return "met";
    case TargetStatus::kMissed:
      return "missed";
    case TargetStatus::kUntargeted:
      return "untargeted";
  }
  return "untargeted";
}

std::optional<double> ComparisonReport::mean_targeted_reduction() const {
  double sum = 0.0;
  int n = 0;
  for (const FlowComparison& f : flows) {
    if (f.delay_target && f.ratio) {
      sum += 1.0 - *f.ratio;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

ComparisonReport compare_runs(const RunMetrics& baseline, const RunMetrics& weighted) {
  if (baseline.flows.size() != weighted.flows.size()) {
    throw ConfigError("compare_runs: flow counts differ (" + std::to_string(baseline.flows.size()) +
                      " vs " + std::to_string(weighted.flows.size()) + ")");
  }
  ComparisonReport report;
  for (std::size_t f = 0; f < baseline.flows.size(); ++f) {
    const FlowMetrics& b = baseline.flows[f];
    const FlowMetrics& w = weighted.flows[f];
    if (b.name != w.name || b.flow_id != w.flow_id || b.arrival_rate != w.arrival_rate) {
      throw ConfigError("compare_runs: flow " + std::to_string(f) + " differs (" + b.name +
                        " vs " + w.name + ")");
    }
    FlowComparison row;
    row.name = w.name;
    row.delay_target = w.delay_target;
    row.baseline_delay = b.mean_delay;
    row.weighted_delay = w.mean_delay;
    if (b.mean_delay && w.mean_delay && *b.mean_delay > 0.0) {
      row.ratio = *w.mean_delay / *b.mean_delay;
    } else if (b.mean_delay && w.mean_delay && *b.mean_delay == *w.mean_delay) {
      row.ratio = 1.0;
    }
    if (w.delay_target) {
      row.status = w.mean_delay && *w.mean_delay <= *w.delay_target ? TargetStatus::kMet
                                                                    : TargetStatus::kMissed;
    }
    report.flows.push_back(std::move(row));
  }
  return report;
}

json to_json(const ComparisonReport& report) {
  json flows = json::array();
  for (const FlowComparison& f : report.flows) {
    flows.push_back({{"name", f.name},
                     {"delay_target", optional_json(f.delay_target)},
                     {"baseline_delay", optional_json(f.baseline_delay)},
                     {"weighted_delay", optional_json(f.weighted_delay)},
                     {"ratio", optional_json(f.ratio)},
                     {"status", to_string(f.status)}});
  }
  return {{"flows", flows}, {"mean_targeted_reduction", optional_json(report.mean_targeted_reduction())}};
}

}  // namespace qwdr
