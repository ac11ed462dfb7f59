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

#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

#include "spdp/ddp.hpp"
#include "spdp/derivatives.hpp"
#include "spdp/ocp.hpp"
#include "spdp/quadrature.hpp"
#include "spdp/types.hpp"

// Batched evaluation kernels. Every call of l_k, f_k or l_T made by a
// backward pass goes through here. The OpenMP versions split the flattened
// (step, sigma point) index space and write each result to its own slot.
// Their output is bit-identical to the serial versions in namespace ref.

namespace spdp {

/// Nominal-point evaluations for the derivative-based backward pass.
struct StageBatch {
  std::vector<StageDerivatives> derivatives;  // T - 1
  std::vector<double> stage_costs;            // l_k(x_hat_k, u_hat_k)
  std::vector<Vector> next_states;            // f_k(x_hat_k, u_hat_k)
};

/// f_k and l_k at every sigma point of one step's joint window.
struct SigmaImages {
  Matrix next_states;  // n x m_k
  Vector stage_costs;  // m_k
};

/// Instrumented call counts; incremented once per callable invocation.
struct EvalCounters {
  std::atomic<std::size_t> terminal{0};
  std::atomic<std::size_t> stage{0};
};

StageBatch evaluate_stage_derivatives(const ControlProblem& problem, const Trajectory& nominal,
                                      DerivativeProvider provider, Execution exec);

/// windows[k] is the joint (x, u) window of step k; rule.dim() == n + s.
std::vector<SigmaImages> evaluate_stage_sigma_images(const ControlProblem& problem,
                                                     const std::vector<GaussianWindow>& windows,
                                                     const SigmaRule& rule, Execution exec,
                                                     EvalCounters& counters);

/// l_T at every sigma point of the terminal window.
Vector evaluate_terminal_sigma_values(const ControlProblem& problem, const GaussianWindow& window,
                                      const SigmaRule& rule, Execution exec,
                                      EvalCounters& counters);

namespace ref {

StageBatch evaluate_stage_derivatives(const ControlProblem& problem, const Trajectory& nominal,
                                      DerivativeProvider provider);
std::vector<SigmaImages> evaluate_stage_sigma_images(const ControlProblem& problem,
                                                     const std::vector<GaussianWindow>& windows,
                                                     const SigmaRule& rule, EvalCounters& counters);
Vector evaluate_terminal_sigma_values(const ControlProblem& problem, const GaussianWindow& window,
                                      const SigmaRule& rule, EvalCounters& counters);

}  // namespace ref

namespace omp {

StageBatch evaluate_stage_derivatives(const ControlProblem& problem, const Trajectory& nominal,
                                      DerivativeProvider provider);
std::vector<SigmaImages> evaluate_stage_sigma_images(const ControlProblem& problem,
                                                     const std::vector<GaussianWindow>& windows,
                                                     const SigmaRule& rule, EvalCounters& counters);
Vector evaluate_terminal_sigma_values(const ControlProblem& problem, const GaussianWindow& window,
                                      const SigmaRule& rule, EvalCounters& counters);

/// Threads OpenMP will use (1 when built without OpenMP).
int max_threads();

}  // namespace omp

}  // namespace spdp
