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

#include "qwdr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "qwdr/errors.hpp"

namespace qwdr::oracle {

namespace {

using Matrix = std::vector<std::vector<double>>;

constexpr double kPivotEps = 1e-12;
constexpr double kFeasEps = 1e-9;

// Solves m x = rhs in place by Gaussian elimination with partial pivoting.
std::optional<std::vector<double>> solve_dense(Matrix m, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) < kPivotEps) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = m[r][col] / m[col][col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
  return rhs;
}

std::vector<double> indicator(const HalfspaceConstraint& c, std::size_t n) {
  std::vector<double> row(n, 0.0);
  for (std::size_t k : c.support) {
    if (k >= n) throw std::invalid_argument("constraint support exceeds variable count");
    row[k] = 1.0;
  }
  return row;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

// Advances `pick` to the next k-combination of 0..n-1; false when exhausted.
bool next_combination(std::vector<std::size_t>& pick, std::size_t n) {
  const std::size_t k = pick.size();
  for (std::size_t i = k; i-- > 0;) {
    if (pick[i] < n - k + i) {
      ++pick[i];
      for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

LpSolution lp_solve_exact(const LinearProgramInstance& instance, std::size_t max_variables) {
  const std::size_t n = instance.objective.size();
  if (n > max_variables) {
    throw SizeError("lp_solve_exact: " + std::to_string(n) + " variables exceeds the limit of " +
                    std::to_string(max_variables));
  }
  if (n == 0) return {0.0, {}};

  // All rows as a.x <= b: halfspaces, x <= 1, -x <= 0.
  Matrix rows;
  std::vector<double> bounds;
  for (const HalfspaceConstraint& c : instance.constraints) {
    rows.push_back(indicator(c, n));
    bounds.push_back(c.bound);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> upper(n, 0.0);
    upper[i] = 1.0;
    rows.push_back(upper);
    bounds.push_back(1.0);
    std::vector<double> lower(n, 0.0);
    lower[i] = -1.0;
    rows.push_back(lower);
    bounds.push_back(0.0);
  }

  std::optional<LpSolution> best;
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  do {
    Matrix system;
    std::vector<double> rhs;
    for (std::size_t r : pick) {
      system.push_back(rows[r]);
      rhs.push_back(bounds[r]);
    }
    const auto x = solve_dense(std::move(system), std::move(rhs));
    if (!x) continue;
    bool feasible = true;
    for (std::size_t r = 0; r < rows.size() && feasible; ++r) {
      feasible = dot(rows[r], *x) <= bounds[r] + kFeasEps;
    }
    if (!feasible) continue;
    const double value = dot(instance.objective, *x);
    if (!best || value > best->value) best = LpSolution{value, *x};
  } while (next_combination(pick, rows.size()));

  // The origin is always a vertex of this polytope, so best is set.
  return *best;
}

std::vector<double> qp_project_exact(std::span<const double> point,
                                     std::span<const HalfspaceConstraint> constraints,
                                     std::size_t max_variables) {
  const std::size_t n = point.size();
  if (n > max_variables) {
    throw SizeError("qp_project_exact: " + std::to_string(n) + " variables exceeds the limit of " +
                    std::to_string(max_variables));
  }
  const std::size_t m = constraints.size();
  if (m > 20) throw SizeError("qp_project_exact: too many constraints");

  Matrix normals;
  for (const HalfspaceConstraint& c : constraints) normals.push_back(indicator(c, n));

  std::optional<std::vector<double>> best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::size_t{1} << i)) active.push_back(i);
    }
    std::vector<double> multipliers;
    if (!active.empty()) {
      Matrix gram(active.size(), std::vector<double>(active.size()));
      std::vector<double> rhs;
      for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t b = 0; b < active.size(); ++b) {
          gram[a][b] = dot(normals[active[a]], normals[active[b]]);
        }
        rhs.push_back(dot(normals[active[a]], point) - constraints[active[a]].bound);
      }
      auto solved = solve_dense(std::move(gram), std::move(rhs));
      if (!solved) continue;
      multipliers = std::move(*solved);
      if (std::any_of(multipliers.begin(), multipliers.end(),
                      [](double l) { return l < -kFeasEps; })) {
        continue;
      }
    }
    std::vector<double> x(point.begin(), point.end());
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t i = 0; i < n; ++i) x[i] -= multipliers[a] * normals[active[a]][i];
    }
    bool feasible = true;
    for (std::size_t i = 0; i < m && feasible; ++i) {
      feasible = dot(normals[i], x) <= constraints[i].bound + kFeasEps;
    }
    if (!feasible) continue;
    double distance = 0.0;
    for (std::size_t i = 0; i < n; ++i) distance += (x[i] - point[i]) * (x[i] - point[i]);
    if (distance < best_distance) {
      best_distance = distance;
      best = std::move(x);
    }
  }
  if (!best) throw std::runtime_error("qp_project_exact: empty feasible set");
  return *best;
}

SimplexResult simplex_maximize(const Matrix& a, const std::vector<double>& b,
                               const std::vector<double>& c) {
  const std::size_t m = b.size();
  const std::size_t n = c.size();
  const std::size_t width = n + m + 1;  // structural, slack, rhs
  Matrix t(m + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0.0) throw std::invalid_argument("simplex_maximize: needs b >= 0");
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][width - 1] = b[i];
    basis[i] = n + i;
  }
  // Objective row holds reduced costs z_j - c_j; optimal when none negative.
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  constexpr double kEps = 1e-11;
  std::size_t degenerate_streak = 0;
  const std::size_t max_iterations = 200 * (n + m) + 1000;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iterations) throw std::runtime_error("simplex_maximize: iteration limit");
    // Dantzig's rule, falling back to Bland's rule to break cycling.
    const bool bland = degenerate_streak > 50;
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t[m][j] >= -kEps) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (!enter || t[m][j] < t[m][*enter]) enter = j;
    }
    if (!enter) break;

    std::optional<std::size_t> leave;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][*enter] <= kEps) continue;
      const double ratio = t[i][width - 1] / t[i][*enter];
      if (!leave || ratio < best_ratio - kEps ||
          (ratio <= best_ratio + kEps && basis[i] < basis[*leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (!leave) throw std::runtime_error("simplex_maximize: unbounded");
    degenerate_streak = best_ratio <= kEps ? degenerate_streak + 1 : 0;

    const std::size_t r = *leave;
    const double pivot = t[r][*enter];
    for (double& v : t[r]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r) continue;
      const double factor = t[i][*enter];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= factor * t[r][j];
    }
    basis[r] = *enter;
  }

  SimplexResult result;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) result.x[basis[i]] = t[i][width - 1];
  }
  result.value = t[m][width - 1];
  return result;
}

std::vector<std::vector<std::size_t>> enumerate_activation_sets(const NetworkModel& model,
                                                                std::size_t max_sets) {
  std::vector<std::vector<std::size_t>> sets;
  std::vector<std::size_t> current;
  std::vector<char> busy(static_cast<std::size_t>(model.num_nodes()) + 1, 0);
  const std::size_t k_count = model.num_elements();

  auto recurse = [&](auto&& self, std::size_t next) -> void {
    for (std::size_t k = next; k < k_count; ++k) {
      const LinkFlow& e = model.element(k);
      auto& from = busy[static_cast<std::size_t>(e.from)];
      auto& to = busy[static_cast<std::size_t>(e.to)];
      if (from || to) continue;
      from = to = 1;
      current.push_back(k);
      if (sets.size() >= max_sets) {
        throw SizeError("activation-set enumeration exceeds " + std::to_string(max_sets) +
                        " sets");
      }
      sets.push_back(current);
      self(self, k + 1);
      current.pop_back();
      from = to = 0;
    }
  };
  recurse(recurse, 0);
  return sets;
}

CapacityQuery make_capacity_query(const NetworkModel& model, const ChannelModel& channel,
                                  std::size_t samples) {
  CapacityQuery query;
  query.model = model;
  for (const FlowSpec& flow : model.flows()) query.arrival_rates.push_back(flow.arrival_rate);
  const double p = samples == 0 ? 0.0 : 1.0 / static_cast<double>(samples);
  for (std::size_t m = 0; m < samples; ++m) {
    query.channel_states.push_back({draw_channel(channel, m).rates, p});
  }
  return query;
}

std::string to_string(Membership membership) {
  switch (membership) {
    case Membership::kInside:
      return "inside";
    case Membership::kOutside:
      return "outside";
    case Membership::kBoundary:
      return "boundary-band";
  }
  return "boundary-band";
}

CapacityResult capacity_membership(const CapacityQuery& query) {
  const NetworkModel& model = query.model;
  if (query.arrival_rates.size() != model.flows().size()) {
    throw std::invalid_argument("capacity_membership: one arrival rate per flow required");
  }
  if (query.channel_states.empty()) {
    throw std::invalid_argument("capacity_membership: no channel states");
  }

  // Channel-averaged service rate per element.
  std::vector<double> rate(model.num_elements(), 0.0);
  for (const ChannelSample& state : query.channel_states) {
    for (std::size_t k = 0; k < model.num_elements(); ++k) {
      const double mu = state.rates[model.element_link(k)];
      rate[k] += state.probability * (query.integer_service ? std::floor(mu) : mu);
    }
  }

  // One row per (flow, hop): the node route[hop] holding flow f traffic.
  struct Row {
    std::size_t flow;
    std::size_t hop;
  };
  std::vector<Row> rows;
  std::vector<std::vector<std::size_t>> row_of(model.flows().size());
  for (std::size_t f = 0; f < model.flows().size(); ++f) {
    for (std::size_t h = 0; h < model.flow(f).hops(); ++h) {
      row_of[f].push_back(rows.size());
      rows.push_back({f, h});
    }
  }
  auto lambda = [&](const Row& r) { return r.hop == 0 ? query.arrival_rates[r.flow] : 0.0; };

  const auto sets = enumerate_activation_sets(model, query.max_activation_sets);
  CapacityResult result;
  result.activation_sets = sets.size();
  if (rows.empty()) {
    result.membership = Membership::kInside;
    result.epsilon = std::numeric_limits<double>::infinity();
    result.schedule.assign(model.num_elements(), 0.0);
    return result;
  }

  // Variables: theta_a per activation set, then e = epsilon + shift >= 0.
  // Rows: -sum_a theta_a net_r(a) + e <= shift - lambda_r, and sum theta <= 1
  // (the idle set absorbs the remainder).
  double shift = 1.0;
  for (const Row& r : rows) shift = std::max(shift, lambda(r) + 1.0);
  const std::size_t vars = sets.size() + 1;
  Matrix a(rows.size() + 1, std::vector<double>(vars, 0.0));
  std::vector<double> b(rows.size() + 1, 0.0);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t k : sets[s]) {
      const LinkFlow& e = model.element(k);
      a[row_of[e.flow][e.hop]][s] -= rate[k];
      if (e.hop + 1 < model.flow(e.flow).hops()) a[row_of[e.flow][e.hop + 1]][s] += rate[k];
    }
    a[rows.size()][s] = 1.0;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    a[r][vars - 1] = 1.0;
    b[r] = shift - lambda(rows[r]);
  }
  b[rows.size()] = 1.0;
  std::vector<double> c(vars, 0.0);
  c[vars - 1] = 1.0;

  const SimplexResult lp = simplex_maximize(a, b, c);
  result.epsilon = lp.value - shift;
  result.schedule.assign(model.num_elements(), 0.0);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t k : sets[s]) result.schedule[k] += lp.x[s];
  }
  for (const Row& r : rows) {
    const LinkFlow* out = nullptr;
    double net = 0.0;
    for (std::size_t k = 0; k < model.num_elements(); ++k) {
      const LinkFlow& e = model.element(k);
      if (e.flow != r.flow) continue;
      if (e.hop == r.hop) {
        net += result.schedule[k] * rate[k];
        out = &e;
      } else if (e.hop + 1 == r.hop) {
        net -= result.schedule[k] * rate[k];
      }
    }
    result.rows.push_back({out->from, model.flow(r.flow).id(), lambda(r), net - lambda(r)});
  }
  if (result.epsilon > query.tolerance) {
    result.membership = Membership::kInside;
  } else if (result.epsilon < -query.tolerance) {
    result.membership = Membership::kOutside;
  } else {
    result.membership = Membership::kBoundary;
  }
  return result;
}

}  // namespace qwdr::oracle
