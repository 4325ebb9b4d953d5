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

#ifndef QWDR_SOLVER_HPP_
#define QWDR_SOLVER_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qwdr/channel.hpp"
#include "qwdr/network.hpp"
#include "qwdr/queues.hpp"

namespace qwdr {

// Logistic weight 1 + a1 / (1 + exp(-a2 (x - threshold))).
struct WeightConfig {
  double a1 = 0.2;  // weight ranges over [1, 1 + a1]
  double a2 = 2.0;  // steepness, 1/packets
};

double weight(double backlog, double threshold, const WeightConfig& config);

// Per-flow weight threshold lambda * D (Little's law) for flows that carry a
// delay target and have weighting enabled; nullopt means w == 1.
std::vector<std::optional<double>> weight_thresholds(const NetworkModel& model);

// <s, indicator(support)> <= bound.
struct HalfspaceConstraint {
  NodeId node = 0;
  std::vector<std::size_t> support;  // sorted element indices
  double bound = 1.0;
};

// One constraint per node with incident elements, plus for every element the
// constraints of its two endpoints.
struct ConstraintGeometry {
  std::vector<HalfspaceConstraint> constraints;
  std::vector<std::pair<std::size_t, std::size_t>> element_constraints;  // (from node, to node)
};

ConstraintGeometry build_constraint_geometry(const NetworkModel& model);

enum class ProjectionMethod {
  // Limit of the alternating scheme between the two endpoint halfspaces,
  // resolved exactly from the two constraint sums and their overlap.
  kClosedForm,
  // Dykstra's alternating projections, at most n_rep rounds.
  kDykstra,
};

struct SolverConfig {
  double alpha = 1e-4;
  int cycles = 15;
  int n_rep = 10;
  double tolerance = 1e-9;
  ProjectionMethod projection = ProjectionMethod::kClosedForm;
};

void validate(const SolverConfig& config);

using AllocationVector = std::vector<double>;

// Projection onto a single halfspace: if the constraint is violated, every
// support coordinate drops by (sum - bound) / |support|.
void project_onto_halfspace(std::span<double> s, const HalfspaceConstraint& constraint);

// Projection onto the intersection of the two endpoint halfspaces of an
// updated element.
void project_pair(std::span<double> s, const HalfspaceConstraint& a, const HalfspaceConstraint& b,
                  const SolverConfig& config);

// Objective coefficients at one review instant.
struct ReviewProblem {
  std::vector<double> coefficients;   // w(Q^f, Qbar^f) Q_ij^f mu_ij
  std::vector<PacketCount> backlogs;  // Q_ij^f

  double max_coefficient() const;
};

double gradient(std::size_t k, const QueueMatrix& queues, const ChannelState& channel,
                const NetworkModel& model, const WeightConfig& weights,
                std::span<const std::optional<double>> thresholds);

ReviewProblem make_review_problem(const NetworkModel& model, const QueueMatrix& queues,
                                  const ChannelState& channel, const WeightConfig& weights,
                                  std::span<const std::optional<double>> thresholds);

// Called after every incremental step with (step, objective of the iterate).
using StepObserver = std::function<void(std::size_t, double)>;

// Cyclic incremental gradient ascent from zero, cycles * |K| steps, with no
// finalization.
AllocationVector ascend(std::span<const double> coefficients, const ConstraintGeometry& geometry,
                        const SolverConfig& config, const StepObserver& observer = {});

// Clamps negatives, rescales every node whose incident sum exceeds one, and
// zeroes elements with no differential backlog.
void finalize_allocation(AllocationVector& s, const ConstraintGeometry& geometry,
                         std::span<const PacketCount> backlogs);

AllocationVector solve_allocation(const ReviewProblem& problem, const ConstraintGeometry& geometry,
                                  const SolverConfig& config, const StepObserver& observer = {});

AllocationVector solve_allocation(const QueueMatrix& queues, const ChannelState& channel,
                                  const NetworkModel& model, const SolverConfig& solver,
                                  const WeightConfig& weights);

double objective(std::span<const double> coefficients, std::span<const double> s);

bool is_feasible(std::span<const double> s, const ConstraintGeometry& geometry,
                 double tolerance = 1e-9);

// Asymptotic optimality gap of the incremental iteration with constant step:
// alpha (4 + 1/|K|) |K|^2 c1^2 / 2.
double lemma1_bound(double alpha, std::size_t num_elements, double c1);

}  // namespace qwdr

#endif  // QWDR_SOLVER_HPP_
