/*
 Copyright 2026 The SPDP Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Serial reference kernels.

#include <cmath>
#include <string>

#include "spdp/errors.hpp"
#include "spdp/kernels.hpp"

namespace spdp::ref {

StageBatch evaluate_stage_derivatives(const ControlProblem& problem, const Trajectory& nominal,
                                      DerivativeProvider provider) {
  const auto steps = static_cast<std::size_t>(problem.num_controls());
  StageBatch batch;
  batch.derivatives.resize(steps);
  batch.stage_costs.resize(steps);
  batch.next_states.resize(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const int k = static_cast<int>(i);
    const Vector& x = nominal.states[i];
    const Vector& u = nominal.controls[i];
    batch.derivatives[i] = stage_derivatives(problem, k, x, u, provider);
    batch.stage_costs[i] = problem.stage_cost(k, x, u);
    batch.next_states[i] = problem.dynamics(k, x, u);
    if (!std::isfinite(batch.stage_costs[i]) || !batch.next_states[i].allFinite()) {
      throw NonFiniteError("non-finite cost or dynamics at nominal step " + std::to_string(k), k, x);
    }
  }
  return batch;
}

std::vector<SigmaImages> evaluate_stage_sigma_images(const ControlProblem& problem,
                                                     const std::vector<GaussianWindow>& windows,
                                                     const SigmaRule& rule, EvalCounters& counters) {
  const int n = problem.state_dim;
  const int s = problem.control_dim;
  const auto m = static_cast<Eigen::Index>(rule.size());
  std::vector<SigmaImages> out(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k) {
    out[k].next_states.resize(n, m);
    out[k].stage_costs.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vector y = windows[k].transform(rule.points().col(i));
      const Vector x = y.head(n);
      const Vector u = y.tail(s);
      const Vector next = problem.dynamics(static_cast<int>(k), x, u);
      const double cost = problem.stage_cost(static_cast<int>(k), x, u);
      counters.stage.fetch_add(1, std::memory_order_relaxed);
      if (!next.allFinite() || !std::isfinite(cost)) {
        throw NonFiniteError("non-finite cost or dynamics at sigma point " + std::to_string(i) +
                                 " of step " + std::to_string(k),
                             static_cast<int>(k), y);
      }
      out[k].next_states.col(i) = next;
      out[k].stage_costs(i) = cost;
    }
  }
  return out;
}

Vector evaluate_terminal_sigma_values(const ControlProblem& problem, const GaussianWindow& window,
                                      const SigmaRule& rule, EvalCounters& counters) {
  const auto m = static_cast<Eigen::Index>(rule.size());
  Vector values(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vector y = window.transform(rule.points().col(i));
    values(i) = problem.terminal_cost(y);
    counters.terminal.fetch_add(1, std::memory_order_relaxed);
    if (!std::isfinite(values(i))) {
      throw NonFiniteError("non-finite terminal cost at sigma point " + std::to_string(i),
                           problem.horizon - 1, y);
    }
  }
  return values;
}

}  // namespace spdp::ref
