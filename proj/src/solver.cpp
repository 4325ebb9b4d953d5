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

#include "qwdr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qwdr/errors.hpp"

namespace qwdr {

namespace {

double support_sum(std::span<const double> s, const HalfspaceConstraint& c) {
  double sum = 0.0;
  for (std::size_t k : c.support) sum += s[k];
  return sum;
}

void shift(std::span<double> s, const HalfspaceConstraint& c, double amount) {
  for (std::size_t k : c.support) s[k] -= amount;
}

std::size_t overlap(const HalfspaceConstraint& a, const HalfspaceConstraint& b) {
  std::size_t count = 0;
  auto i = a.support.begin();
  auto j = b.support.begin();
  while (i != a.support.end() && j != b.support.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

void project_pair_closed_form(std::span<double> s, const HalfspaceConstraint& a,
                              const HalfspaceConstraint& b) {
  const double excess_a = support_sum(s, a) - a.bound;
  const double excess_b = support_sum(s, b) - b.bound;
  if (excess_a <= 0.0 && excess_b <= 0.0) return;

  const double na = static_cast<double>(a.support.size());
  const double nb = static_cast<double>(b.support.size());
  const double nab = static_cast<double>(overlap(a, b));
  // Tolerance for "the other constraint still holds" after a single shift.
  constexpr double kSlack = 1e-12;

  if (excess_a > 0.0) {
    const double da = excess_a / na;
    if (excess_b - da * nab <= kSlack) {
      shift(s, a, da);
      return;
    }
  }
  if (excess_b > 0.0) {
    const double db = excess_b / nb;
    if (excess_a - db * nab <= kSlack) {
      shift(s, b, db);
      return;
    }
  }
  // Both faces active: solve the 2x2 Gram system of the two indicator normals.
  const double det = na * nb - nab * nab;
  const double da = std::max(0.0, (excess_a * nb - excess_b * nab) / det);
  const double db = std::max(0.0, (excess_b * na - excess_a * nab) / det);
  shift(s, a, da);
  shift(s, b, db);
}

void project_pair_dykstra(std::span<double> s, const HalfspaceConstraint& a,
                          const HalfspaceConstraint& b, int rounds, double tolerance) {
  if (support_sum(s, a) <= a.bound && support_sum(s, b) <= b.bound) return;
  // Dykstra increments are multiples of the indicator normals, so one scalar
  // per constraint carries them.
  double ca = 0.0;
  double cb = 0.0;
  for (int r = 0; r < rounds; ++r) {
    shift(s, a, -ca);
    const double next_a = std::max(0.0, (support_sum(s, a) - a.bound) /
                                            static_cast<double>(a.support.size()));
    shift(s, a, next_a);
    shift(s, b, -cb);
    const double next_b = std::max(0.0, (support_sum(s, b) - b.bound) /
                                            static_cast<double>(b.support.size()));
    shift(s, b, next_b);
    const double change = std::abs(next_a - ca) + std::abs(next_b - cb);
    ca = next_a;
    cb = next_b;
    if (change <= tolerance) break;
  }
}

}  // namespace

double weight(double backlog, double threshold, const WeightConfig& config) {
  return 1.0 + config.a1 / (1.0 + std::exp(-config.a2 * (backlog - threshold)));
}

std::vector<std::optional<double>> weight_thresholds(const NetworkModel& model) {
  std::vector<std::optional<double>> out;
  out.reserve(model.flows().size());
  for (const FlowSpec& flow : model.flows()) {
    if (flow.weight_enabled && flow.delay_target && flow.arrival_rate > 0.0) {
      out.emplace_back(flow.arrival_rate * *flow.delay_target);
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

ConstraintGeometry build_constraint_geometry(const NetworkModel& model) {
  ConstraintGeometry geometry;
  std::vector<std::size_t> by_node(static_cast<std::size_t>(model.num_nodes()) + 1, 0);
  for (NodeId n = 1; n <= model.num_nodes(); ++n) {
    const auto& incident = model.incident_elements(n);
    if (incident.empty()) continue;
    by_node[static_cast<std::size_t>(n)] = geometry.constraints.size();
    geometry.constraints.push_back({n, incident, 1.0});
  }
  geometry.element_constraints.reserve(model.num_elements());
  for (const LinkFlow& e : model.elements().elements()) {
    geometry.element_constraints.emplace_back(by_node[static_cast<std::size_t>(e.from)],
                                              by_node[static_cast<std::size_t>(e.to)]);
  }
  return geometry;
}

void validate(const SolverConfig& config) {
  if (!(config.alpha > 0.0)) throw ConfigError("solver.alpha: must be > 0");
  if (config.cycles < 1) throw ConfigError("solver.cycles: must be >= 1");
  if (config.n_rep < 1) throw ConfigError("solver.n_rep: must be >= 1");
  if (!(config.tolerance >= 0.0)) throw ConfigError("solver.tolerance: must be >= 0");
}

void project_onto_halfspace(std::span<double> s, const HalfspaceConstraint& constraint) {
  const double excess = support_sum(s, constraint) - constraint.bound;
  if (excess <= 0.0) return;
  shift(s, constraint, excess / static_cast<double>(constraint.support.size()));
}

void project_pair(std::span<double> s, const HalfspaceConstraint& a, const HalfspaceConstraint& b,
                  const SolverConfig& config) {
  if (config.projection == ProjectionMethod::kDykstra) {
    project_pair_dykstra(s, a, b, config.n_rep, config.tolerance);
  } else {
    project_pair_closed_form(s, a, b);
  }
}

double ReviewProblem::max_coefficient() const {
  double best = 0.0;
  for (double c : coefficients) best = std::max(best, c);
  return best;
}

double gradient(std::size_t k, const QueueMatrix& queues, const ChannelState& channel,
                const NetworkModel& model, const WeightConfig& weights,
                std::span<const std::optional<double>> thresholds) {
  const LinkFlow& e = model.element(k);
  const PacketCount backlog = differential_backlog(queues, e);
  if (backlog == 0) return 0.0;
  const double w = thresholds[e.flow]
                       ? weight(static_cast<double>(queues.flow_backlog(e.flow)),
                                *thresholds[e.flow], weights)
                       : 1.0;
  return w * static_cast<double>(backlog) * channel.rates[model.element_link(k)];
}

ReviewProblem make_review_problem(const NetworkModel& model, const QueueMatrix& queues,
                                  const ChannelState& channel, const WeightConfig& weights,
                                  std::span<const std::optional<double>> thresholds) {
  ReviewProblem problem;
  problem.backlogs = differential_backlogs(queues, model);
  problem.coefficients.reserve(model.num_elements());
  for (std::size_t k = 0; k < model.num_elements(); ++k) {
    problem.coefficients.push_back(gradient(k, queues, channel, model, weights, thresholds));
  }
  return problem;
}

AllocationVector ascend(std::span<const double> coefficients, const ConstraintGeometry& geometry,
                        const SolverConfig& config, const StepObserver& observer) {
  AllocationVector s(coefficients.size(), 0.0);
  std::size_t step = 0;
  for (int cycle = 0; cycle < config.cycles; ++cycle) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      s[k] += config.alpha * coefficients[k];
      const auto [from, to] = geometry.element_constraints[k];
      project_pair(s, geometry.constraints[from], geometry.constraints[to], config);
      if (observer) observer(step, objective(coefficients, s));
      ++step;
    }
  }
  return s;
}

void finalize_allocation(AllocationVector& s, const ConstraintGeometry& geometry,
                         std::span<const PacketCount> backlogs) {
  for (double& v : s) v = std::max(v, 0.0);
  for (const HalfspaceConstraint& c : geometry.constraints) {
    const double sum = support_sum(s, c);
    if (sum > c.bound) {
      for (std::size_t k : c.support) s[k] /= sum;
    }
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (backlogs[k] == 0) s[k] = 0.0;
  }
}

AllocationVector solve_allocation(const ReviewProblem& problem, const ConstraintGeometry& geometry,
                                  const SolverConfig& config, const StepObserver& observer) {
  const bool any_backlog = std::any_of(problem.backlogs.begin(), problem.backlogs.end(),
                                       [](PacketCount q) { return q > 0; });
  if (!any_backlog) return AllocationVector(problem.coefficients.size(), 0.0);
  AllocationVector s = ascend(problem.coefficients, geometry, config, observer);
  finalize_allocation(s, geometry, problem.backlogs);
  return s;
}

AllocationVector solve_allocation(const QueueMatrix& queues, const ChannelState& channel,
                                  const NetworkModel& model, const SolverConfig& solver,
                                  const WeightConfig& weights) {
  const auto thresholds = weight_thresholds(model);
  const ReviewProblem problem = make_review_problem(model, queues, channel, weights, thresholds);
  return solve_allocation(problem, build_constraint_geometry(model), solver);
}

double objective(std::span<const double> coefficients, std::span<const double> s) {
  return std::inner_product(coefficients.begin(), coefficients.end(), s.begin(), 0.0);
}

bool is_feasible(std::span<const double> s, const ConstraintGeometry& geometry,
                 double tolerance) {
  if (std::any_of(s.begin(), s.end(), [](double v) { return v < 0.0; })) return false;
  return std::all_of(geometry.constraints.begin(), geometry.constraints.end(),
                     [&](const HalfspaceConstraint& c) {
                       return support_sum(s, c) <= c.bound + tolerance;
                     });
}

double lemma1_bound(double alpha, std::size_t num_elements, double c1) {
  if (num_elements == 0) return 0.0;
  const double k = static_cast<double>(num_elements);
  return alpha * (4.0 + 1.0 / k) * k * k * c1 * c1 / 2.0;
}

}  // namespace qwdr
