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

#ifndef QWDR_ORACLE_HPP_
#define QWDR_ORACLE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qwdr/channel.hpp"
#include "qwdr/network.hpp"
#include "qwdr/solver.hpp"

// Exact desk-scale references used to check the solver and to decide
// whether an arrival-rate matrix lies inside the capacity region.
namespace qwdr::oracle {

// max c.x subject to support-sum constraints and 0 <= x <= 1.
struct LinearProgramInstance {
  std::vector<double> objective;
  std::vector<HalfspaceConstraint> constraints;
};

struct LpSolution {
  double value = 0.0;
  std::vector<double> optimizer;
};

// Enumerates every basic solution (each choice of |x| tight rows among the
// constraints and box faces) and keeps the best feasible one. Throws
// SizeError beyond `max_variables`.
LpSolution lp_solve_exact(const LinearProgramInstance& instance, std::size_t max_variables = 8);

// Euclidean projection onto the intersection of the halfspaces by brute-force
// active-set search: for every subset of constraints taken as active, solve
// the KKT system and keep the nearest point with non-negative multipliers.
std::vector<double> qp_project_exact(std::span<const double> point,
                                     std::span<const HalfspaceConstraint> constraints,
                                     std::size_t max_variables = 6);

// Dense tableau simplex for max c.x s.t. A x <= b, x >= 0 with b >= 0.
// Throws std::runtime_error when unbounded.
struct SimplexResult {
  double value = 0.0;
  std::vector<double> x;
};
SimplexResult simplex_maximize(const std::vector<std::vector<double>>& a,
                               const std::vector<double>& b, const std::vector<double>& c);

// Every non-empty set of link-flow elements with no two sharing a node.
std::vector<std::vector<std::size_t>> enumerate_activation_sets(const NetworkModel& model,
                                                                std::size_t max_sets);

struct ChannelSample {
  std::vector<double> rates;  // per link
  double probability = 0.0;
};

struct CapacityQuery {
  NetworkModel model;
  std::vector<double> arrival_rates;           // per flow, at its source
  std::vector<ChannelSample> channel_states;   // pi_m
  bool integer_service = true;                 // packets move floor(mu) per slot
  double tolerance = 1e-6;
  std::size_t max_activation_sets = 500000;
};

// Arrival rates from the model and `samples` i.i.d. channel draws with
// equal weights.
CapacityQuery make_capacity_query(const NetworkModel& model, const ChannelModel& channel,
                                  std::size_t samples);

enum class Membership { kInside, kOutside, kBoundary };
std::string to_string(Membership membership);

struct RowSlack {
  NodeId node = 0;
  NodeId flow_id = 0;
  double arrival_rate = 0.0;
  double slack = 0.0;  // net service minus arrivals at the optimum
};

struct CapacityResult {
  Membership membership = Membership::kBoundary;
  double epsilon = 0.0;  // largest uniform slack; negative means outside
  std::vector<RowSlack> rows;
  std::vector<double> schedule;  // s(k) of the maximizing convex combination
  std::size_t activation_sets = 0;
};

// Largest epsilon such that some convex combination of activation sets
// serves every (node, flow) with net rate >= lambda_i^f + epsilon under the
// channel-averaged rates.
CapacityResult capacity_membership(const CapacityQuery& query);

}  // namespace qwdr::oracle

#endif  // QWDR_ORACLE_HPP_
