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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qwdr/errors.hpp"
#include "qwdr/oracle.hpp"
#include "qwdr/solver.hpp"
#include "support/oracles.hpp"

namespace qwdr {
namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

FlowSpec make_flow(std::vector<NodeId> route, double rate = 1.0) {
  FlowSpec f;
  f.name = "F" + std::to_string(route.back());
  f.route = std::move(route);
  f.arrival_rate = rate;
  return f;
}

TEST(WeightTest, UnitValues) {
  const WeightConfig cfg{0.2, 2.0};
  EXPECT_NEAR(weight(50.0, 50.0, cfg), 1.1, 1e-12);
  EXPECT_NEAR(weight(60.0, 50.0, cfg), 1.0 + 0.2 / (1.0 + std::exp(-20.0)), 1e-15);
  EXPECT_NEAR(weight(1e6, 50.0, cfg), 1.2, 1e-12);
  EXPECT_NEAR(weight(-1e6, 50.0, cfg), 1.0, 1e-12);
  const WeightConfig off{0.0, 2.0};
  for (double x : {0.0, 10.0, 1e9}) EXPECT_EQ(weight(x, 5.0, off), 1.0);
}

TEST(WeightTest, BoundedAndMonotone) {
  const WeightConfig cfg{0.2, 2.0};
  double previous = 1.0;
  for (double x = 0.0; x < 200.0; x += 0.25) {
    const double w = weight(x, 100.0, cfg);
    EXPECT_GE(w, 1.0);
    EXPECT_LE(w, 1.2);
    EXPECT_GE(w, previous);
    previous = w;
  }
}

TEST(WeightTest, ThresholdsFollowLittlesLaw) {
  FlowSpec a = make_flow({1, 2}, 3.74);
  a.delay_target = 200.0;
  FlowSpec b = make_flow({2, 3}, 2.5);
  FlowSpec c = make_flow({3, 4}, 3.8);
  c.delay_target = 70.0;
  c.weight_enabled = false;
  const NetworkModel model(4, {{1, 2}, {2, 3}, {3, 4}}, {a, b, c});
  const auto t = weight_thresholds(model);
  ASSERT_TRUE(t[0].has_value());
  EXPECT_NEAR(*t[0], 748.0, 1e-9);
  EXPECT_FALSE(t[1].has_value());
  EXPECT_FALSE(t[2].has_value());
}

struct SingleFlowFixture {
  NetworkModel model{3, {{1, 2}, {2, 3}}, {make_flow({1, 2, 3})}};
  QueueMatrix queues{model};
  ChannelState channel{{0.0, 0.0}, {2.0, 0.0}};
};

TEST(GradientTest, ProductOfWeightBacklogAndRate) {
  SingleFlowFixture fx;
  fx.queues.queue(0, 0).resize(10);
  const std::vector<std::optional<double>> at_threshold = {10.0};
  const WeightConfig cfg{0.2, 2.0};
  EXPECT_NEAR(gradient(0, fx.queues, fx.channel, fx.model, cfg, at_threshold), 22.0, 1e-12);
  const std::vector<std::optional<double>> none = {std::nullopt};
  EXPECT_NEAR(gradient(0, fx.queues, fx.channel, fx.model, cfg, none), 20.0, 1e-12);
  // Dead channel on the second hop, and no backlog there either.
  EXPECT_EQ(gradient(1, fx.queues, fx.channel, fx.model, cfg, none), 0.0);
  fx.queues.queue(0, 1).resize(3);
  EXPECT_EQ(gradient(1, fx.queues, fx.channel, fx.model, cfg, none), 0.0);
}

TEST(GradientTest, UsesNetworkWideFlowBacklog) {
  SingleFlowFixture fx;
  fx.queues.queue(0, 0).resize(4);
  fx.queues.queue(0, 1).resize(6);  // Q^f = 10 while Q_1^f = 4
  const std::vector<std::optional<double>> thresholds = {10.0};
  const WeightConfig cfg{0.2, 2.0};
  fx.channel.rates = {2.0, 1.0};
  EXPECT_NEAR(gradient(1, fx.queues, fx.channel, fx.model, cfg, thresholds), 1.1 * 6 * 1.0,
              1e-12);
}

HalfspaceConstraint constraint(std::vector<std::size_t> support, double bound = 1.0) {
  return {0, std::move(support), bound};
}

TEST(ProjectionTest, SingleHalfspace) {
  std::vector<double> s = {1.0, 1.0};
  project_onto_halfspace(s, constraint({0, 1}));
  EXPECT_NEAR(s[0], 0.5, 1e-15);
  EXPECT_NEAR(s[1], 0.5, 1e-15);

  std::vector<double> t = {0.9, 0.3, 0.4};
  project_onto_halfspace(t, constraint({0, 1, 2}));
  EXPECT_NEAR(t[0], 0.7, 1e-12);
  EXPECT_NEAR(t[1], 0.1, 1e-12);
  EXPECT_NEAR(t[2], 0.2, 1e-12);

  std::vector<double> feasible = {0.2, 0.3};
  project_onto_halfspace(feasible, constraint({0, 1}));
  EXPECT_EQ(feasible, (std::vector<double>{0.2, 0.3}));
}

TEST(ProjectionTest, DisplacementIsParallelToNormal) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(4);
    for (double& v : s) v = u(gen);
    const auto c = constraint({0, 2, 3});
    std::vector<double> r = s;
    project_onto_halfspace(r, c);
    EXPECT_DOUBLE_EQ(r[1], s[1]);
    EXPECT_NEAR(s[0] - r[0], s[2] - r[2], 1e-12);
    EXPECT_NEAR(s[0] - r[0], s[3] - r[3], 1e-12);
    EXPECT_LE(r[0] + r[2] + r[3], 1.0 + 1e-12);
  }
}

TEST(ProjectionTest, NeverBreaksASatisfiedNonNegativeConstraint) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(3);
    for (double& v : s) v = u(gen);
    const auto a = constraint({0, 1}, 0.5);
    const auto b = constraint({1, 2});
    if (s[1] + s[2] > 1.0) continue;
    project_onto_halfspace(s, a);
    EXPECT_LE(s[1] + s[2], 1.0 + 1e-12);
  }
}

TEST(ProjectionTest, PairShortcuts) {
  const SolverConfig cfg;
  std::vector<double> neither = {0.2, 0.3, 0.4};
  project_pair(neither, constraint({0, 1}), constraint({1, 2}), cfg);
  EXPECT_EQ(neither, (std::vector<double>{0.2, 0.3, 0.4}));

  std::vector<double> only_a = {0.9, 0.6, 0.1};
  std::vector<double> single = only_a;
  project_pair(only_a, constraint({0, 1}), constraint({1, 2}), cfg);
  project_onto_halfspace(single, constraint({0, 1}));
  EXPECT_EQ(only_a, single);
}

TEST(ProjectionTest, BothViolatedMatchesExactProjection) {
  // QP answer from the Hildreth dual method in test support, frozen here.
  const std::vector<double> expected = {0.7, 0.3, 0.7};
  const auto a = constraint({0, 1});
  const auto b = constraint({1, 2});
  const auto oracle = testing::hildreth_projection({1.2, 0.9, 0.8}, {{0, 1}, {1, 2}}, {1.0, 1.0});
  EXPECT_LT(distance(oracle, expected), 1e-9);

  std::vector<double> s = {1.2, 0.9, 0.8};
  project_pair(s, a, b, SolverConfig{});
  EXPECT_LT(distance(s, expected), 1e-12);

  const std::vector<HalfspaceConstraint> both = {a, b};
  const std::vector<double> point = {1.2, 0.9, 0.8};
  EXPECT_LT(distance(oracle::qp_project_exact(point, both), expected), 1e-12);
}

TEST(ProjectionTest, RandomPairsAgreeWithIndependentQp) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-0.5, 2.0);
  std::uniform_int_distribution<int> dims(2, 3);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(dims(gen));
    std::vector<double> point(n);
    for (double& v : point) v = u(gen);
    // Two constraints sharing coordinate 0, as the endpoints of one element do.
    const auto a = constraint(n == 2 ? std::vector<std::size_t>{0} : std::vector<std::size_t>{0, 1});
    const auto b = constraint(n == 2 ? std::vector<std::size_t>{0, 1}
                                     : std::vector<std::size_t>{0, 2});
    const auto reference = testing::hildreth_projection(point, {a.support, b.support}, {1.0, 1.0});
    std::vector<double> s = point;
    project_pair(s, a, b, SolverConfig{});
    ASSERT_LT(distance(s, reference), 1e-6) << "trial " << trial;
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(ProjectionTest, DykstraConvergesWithEnoughRounds) {
  SolverConfig cfg;
  cfg.projection = ProjectionMethod::kDykstra;
  cfg.n_rep = 200;
  cfg.tolerance = 0.0;
  std::vector<double> s = {1.2, 0.9, 0.8};
  project_pair(s, constraint({0, 1}), constraint({1, 2}), cfg);
  EXPECT_LT(distance(s, std::vector<double>{0.7, 0.3, 0.7}), 1e-9);
}

TEST(SolverConfigTest, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.alpha = 0.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = SolverConfig{};
  cfg.cycles = 0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = SolverConfig{};
  cfg.n_rep = 0;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(GapBoundTest, Values) {
  // 1e-4 * 4.5 * 4 * 100 / 2
  EXPECT_NEAR(lemma1_bound(1e-4, 2, 10.0), 0.09, 1e-15);
  EXPECT_EQ(lemma1_bound(1e-4, 2, 0.0), 0.0);
  EXPECT_EQ(lemma1_bound(1e-4, 0, 5.0), 0.0);
  EXPECT_NEAR(lemma1_bound(1e-8, 2, 10.0), 9e-6, 1e-18);
  EXPECT_NEAR(lemma1_bound(1e-4, 4, 20.0), 1e-4 * 4.25 * 16 * 400 / 2, 1e-12);
}

TEST(SolveAllocationTest, ZeroBacklogGivesZeroVector) {
  const NetworkModel model(3, {{1, 2}, {2, 3}}, {make_flow({1, 2, 3})});
  const QueueMatrix queues(model);
  const ChannelState channel{{1.0, 1.0}, {3.0, 3.0}};
  const auto s = solve_allocation(queues, channel, model, SolverConfig{}, WeightConfig{});
  EXPECT_EQ(s, (AllocationVector{0.0, 0.0}));
}

TEST(SolveAllocationTest, SingleElementReachesBoundary) {
  const NetworkModel model(2, {{1, 2}}, {make_flow({1, 2})});
  const ConstraintGeometry geometry = build_constraint_geometry(model);
  const ReviewProblem problem{{1000.0}, {50}};
  const auto s = solve_allocation(problem, geometry, SolverConfig{});
  EXPECT_NEAR(s[0], 1.0, 1e-12);
}

TEST(SolveAllocationTest, TwoElementsSharingANodeApproachLpOptimum) {
  const NetworkModel model(3, {{1, 2}, {1, 3}}, {make_flow({1, 2}), make_flow({1, 3})});
  const ConstraintGeometry geometry = build_constraint_geometry(model);
  const std::vector<double> c = {10.0, 4.0};
  oracle::LinearProgramInstance lp{c, geometry.constraints};
  const auto exact = oracle::lp_solve_exact(lp);
  EXPECT_NEAR(exact.value, 10.0, 1e-12);
  EXPECT_NEAR(exact.optimizer[0], 1.0, 1e-12);

  SolverConfig cfg;
  cfg.cycles = 20000;
  const ReviewProblem problem{c, {1, 1}};
  const auto s = solve_allocation(problem, geometry, cfg);
  EXPECT_GE(objective(c, s), exact.value - lemma1_bound(cfg.alpha, 2, 10.0));
}

TEST(SolveAllocationTest, ZeroBacklogElementsAreMasked) {
  const NetworkModel model(3, {{1, 2}, {1, 3}}, {make_flow({1, 2}), make_flow({1, 3})});
  const ConstraintGeometry geometry = build_constraint_geometry(model);
  const ReviewProblem problem{{10.0, 4.0}, {5, 0}};
  const auto s = solve_allocation(problem, geometry, SolverConfig{});
  EXPECT_EQ(s[1], 0.0);
  EXPECT_GT(s[0], 0.0);
}

TEST(SolveAllocationTest, FinalizationRescalesOverfullNodes) {
  const NetworkModel model(3, {{1, 2}, {1, 3}}, {make_flow({1, 2}), make_flow({1, 3})});
  const ConstraintGeometry geometry = build_constraint_geometry(model);
  AllocationVector s = {1.5, -0.2};
  const std::vector<PacketCount> backlogs = {1, 1};
  finalize_allocation(s, geometry, backlogs);
  EXPECT_EQ(s, (AllocationVector{1.0, 0.0}));
}

TEST(SolveAllocationTest, RandomInstancesStayFeasible) {
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> q(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = testing::random_node_sharing_instance(gen, 4, 5000.0);
    const ConstraintGeometry geometry = build_constraint_geometry(inst.model);
    std::vector<PacketCount> backlogs;
    for (std::size_t k = 0; k < inst.coefficients.size(); ++k) backlogs.push_back(q(gen));
    const ReviewProblem problem{inst.coefficients, backlogs};
    const auto s = solve_allocation(problem, geometry, SolverConfig{});
    ASSERT_TRUE(is_feasible(s, geometry, 1e-9));
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (backlogs[k] == 0) EXPECT_EQ(s[k], 0.0);
    }
  }
}

TEST(SolveAllocationTest, LimitingObjectiveWithinGapBound) {
  // The bound holds in the limit of many cycles; 15 cycles from zero is far
  // too short for coefficients of this size.
  std::mt19937_64 gen(41);
  SolverConfig cfg;
  cfg.cycles = 100000;
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = testing::random_node_sharing_instance(gen, 4, 20.0);
    const ConstraintGeometry geometry = build_constraint_geometry(inst.model);
    const double g_star = testing::half_integral_lp_max(inst.coefficients,
                                                        testing::supports_of(geometry));
    const auto s = ascend(inst.coefficients, geometry, cfg);
    double c1 = 0.0;
    for (double c : inst.coefficients) c1 = std::max(c1, c);
    EXPECT_GE(objective(inst.coefficients, s),
              g_star - lemma1_bound(cfg.alpha, inst.coefficients.size(), c1) - 1e-9);
  }
}

TEST(SolveAllocationTest, BestObjectiveNondecreasingInCycles) {
  std::mt19937_64 gen(43);
  auto inst = testing::random_node_sharing_instance(gen, 4, 20.0);
  const ConstraintGeometry geometry = build_constraint_geometry(inst.model);
  double best = 0.0;
  for (int cycles : {15, 30, 60, 120, 240}) {
    SolverConfig cfg;
    cfg.cycles = cycles;
    double run_best = 0.0;
    ascend(inst.coefficients, geometry, cfg,
           [&](std::size_t, double value) { run_best = std::max(run_best, value); });
    EXPECT_GE(run_best, best);
    best = run_best;
  }
}

TEST(SolveAllocationTest, ObserverSeesEveryStep) {
  const NetworkModel model(3, {{1, 2}, {2, 3}}, {make_flow({1, 2, 3})});
  const ConstraintGeometry geometry = build_constraint_geometry(model);
  SolverConfig cfg;
  std::size_t calls = 0;
  ascend(std::vector<double>{1.0, 1.0}, geometry, cfg, [&](std::size_t, double) { ++calls; });
  EXPECT_EQ(calls, 30u);
}

}  // namespace
}  // namespace qwdr
