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

// OpenMP kernels. Callables may throw; the first failure by flattened index
// is rethrown after the parallel region so the reported error matches the
// serial reference.

#include <exception>
#include <cmath>
#include <string>

#include "spdp/errors.hpp"
#include "spdp/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spdp::omp {

namespace {

// Keeps the exception of the lowest failing index.
class FirstError {
 public:
  void record(long index, std::exception_ptr e) {
#pragma omp critical(spdp_first_error)
    {
      if (!error_ || index < index_) {
        index_ = index;
        error_ = std::move(e);
      }
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  long index_ = -1;
  std::exception_ptr error_;
};

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

StageBatch evaluate_stage_derivatives(const ControlProblem& problem, const Trajectory& nominal,
                                      DerivativeProvider provider) {
  const long steps = problem.num_controls();
  StageBatch batch;
  batch.derivatives.resize(static_cast<std::size_t>(steps));
  batch.stage_costs.resize(static_cast<std::size_t>(steps));
  batch.next_states.resize(static_cast<std::size_t>(steps));
  FirstError failure;

#pragma omp parallel for schedule(static)
  for (long t = 0; t < steps; ++t) {
    const auto i = static_cast<std::size_t>(t);
    const int k = static_cast<int>(t);
    try {
      const Vector& x = nominal.states[i];
      const Vector& u = nominal.controls[i];
      batch.derivatives[i] = stage_derivatives(problem, k, x, u, provider);
      batch.stage_costs[i] = problem.stage_cost(k, x, u);
      batch.next_states[i] = problem.dynamics(k, x, u);
      if (!std::isfinite(batch.stage_costs[i]) || !batch.next_states[i].allFinite()) {
        throw NonFiniteError("non-finite cost or dynamics at nominal step " + std::to_string(k), k,
                             x);
      }
    } catch (...) {
      failure.record(t, std::current_exception());
    }
  }
  failure.rethrow();
  return batch;
}

std::vector<SigmaImages> evaluate_stage_sigma_images(const ControlProblem& problem,
                                                     const std::vector<GaussianWindow>& windows,
                                                     const SigmaRule& rule, EvalCounters& counters) {
  const int n = problem.state_dim;
  const int s = problem.control_dim;
  const long m = static_cast<long>(rule.size());
  const long steps = static_cast<long>(windows.size());
  std::vector<SigmaImages> out(windows.size());
  for (auto& img : out) {
    img.next_states.resize(n, m);
    img.stage_costs.resize(m);
  }
  FirstError failure;

#pragma omp parallel for schedule(static)
  for (long t = 0; t < steps * m; ++t) {
    const long k = t / m;
    const long i = t % m;
    const auto ks = static_cast<std::size_t>(k);
    try {
      const Vector y = windows[ks].transform(rule.points().col(i));
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
      out[ks].next_states.col(i) = next;
      out[ks].stage_costs(i) = cost;
    } catch (...) {
      failure.record(t, std::current_exception());
    }
  }
  failure.rethrow();
  return out;
}

Vector evaluate_terminal_sigma_values(const ControlProblem& problem, const GaussianWindow& window,
                                      const SigmaRule& rule, EvalCounters& counters) {
  const long m = static_cast<long>(rule.size());
  Vector values(m);
  FirstError failure;

#pragma omp parallel for schedule(static)
  for (long i = 0; i < m; ++i) {
    try {
      const Vector y = window.transform(rule.points().col(i));
      values(i) = problem.terminal_cost(y);
      counters.terminal.fetch_add(1, std::memory_order_relaxed);
      if (!std::isfinite(values(i))) {
        throw NonFiniteError("non-finite terminal cost at sigma point " + std::to_string(i),
                             problem.horizon - 1, y);
      }
    } catch (...) {
      failure.record(i, std::current_exception());
    }
  }
  failure.rethrow();
  return values;
}

}  // namespace spdp::omp

namespace spdp {

StageBatch evaluate_stage_derivatives(const ControlProblem& problem, const Trajectory& nominal,
                                      DerivativeProvider provider, Execution exec) {
  return exec == Execution::parallel ? omp::evaluate_stage_derivatives(problem, nominal, provider)
                                     : ref::evaluate_stage_derivatives(problem, nominal, provider);
}

std::vector<SigmaImages> evaluate_stage_sigma_images(const ControlProblem& problem,
                                                     const std::vector<GaussianWindow>& windows,
                                                     const SigmaRule& rule, Execution exec,
                                                     EvalCounters& counters) {
  return exec == Execution::parallel
             ? omp::evaluate_stage_sigma_images(problem, windows, rule, counters)
             : ref::evaluate_stage_sigma_images(problem, windows, rule, counters);
}

Vector evaluate_terminal_sigma_values(const ControlProblem& problem, const GaussianWindow& window,
                                      const SigmaRule& rule, Execution exec,
                                      EvalCounters& counters) {
  return exec == Execution::parallel
             ? omp::evaluate_terminal_sigma_values(problem, window, rule, counters)
             : ref::evaluate_terminal_sigma_values(problem, window, rule, counters);
}

}  // namespace spdp
