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

#include <functional>
#include <vector>

#include "spdp/types.hpp"

// Discrete-time optimal control problems
//
//   J(u_1..u_{T-1}; x_1) = l_T(x_T) + sum_{k=1}^{T-1} l_k(x_k, u_k)
//   x_{k+1} = f_k(x_k, u_k)
//
// Steps are written 1-based above; in code the state index runs 0..T-1 and
// the control index 0..T-2, so callables receive k - 1.

namespace spdp {

using Dynamics = std::function<Vector(int k, const Vector& x, const Vector& u)>;
using StageCost = std::function<double(int k, const Vector& x, const Vector& u)>;
using TerminalCost = std::function<double(const Vector& x)>;
using ContinuousDynamics = std::function<Vector(const Vector& x, const Vector& u)>;

/// First and second derivatives of a stage cost at one point.
struct CostExpansion {
  Vector L_x;
  Vector L_u;
  Matrix L_xx;
  Matrix L_xu;
  Matrix L_uu;
};

/// Jacobians and per-output-component Hessians of f_k at one point.
struct DynamicsExpansion {
  Matrix F_x;
  Matrix F_u;
  std::vector<Matrix> F_xx;  // n entries, each n x n
  std::vector<Matrix> F_xu;  // n entries, each n x s
  std::vector<Matrix> F_uu;  // n entries, each s x s
};

struct TerminalExpansion {
  double value = 0.0;
  Vector L_x;
  Matrix L_xx;
};

struct ControlProblem {
  int horizon = 0;  // T: number of states
  int state_dim = 0;
  int control_dim = 0;
  Dynamics dynamics;
  StageCost stage_cost;
  TerminalCost terminal_cost;

  // Optional closed-form derivatives; empty callables fall back to finite
  // differences.
  std::function<CostExpansion(int k, const Vector& x, const Vector& u)> stage_cost_derivatives;
  std::function<TerminalExpansion(const Vector& x)> terminal_cost_derivatives;
  std::function<DynamicsExpansion(int k, const Vector& x, const Vector& u)> dynamics_derivatives;

  int num_controls() const { return horizon - 1; }

  /// Throws std::invalid_argument when dimensions or callables are missing.
  void validate() const;
};

struct Trajectory {
  std::vector<Vector> states;    // T entries
  std::vector<Vector> controls;  // T - 1 entries
};

/// Weights of the quadratic cost
///   l_k = 1/2 (x - x_g)^T W (x - x_g) + u^T R u
///   l_T = 1/2 (x - x_g)^T W_T (x - x_g)
/// Note the control term carries no 1/2.
struct QuadraticCostParams {
  Matrix W;
  Matrix W_T;
  Matrix R;
  Vector x_goal;

  void validate() const;
};

/// Simulates x_{k+1} = f_k(x_k, u_k) from x1. Throws NonFiniteError naming
/// the step at which the state stopped being finite.
Trajectory rollout(const ControlProblem& problem, const Vector& x1,
                   const std::vector<Vector>& controls);

/// Terminal cost plus stage costs. Throws NonFiniteError naming the step.
double total_cost(const ControlProblem& problem, const Trajectory& traj);

/// True when states[k+1] == f_k(states[k], controls[k]) within tol.
bool is_consistent(const ControlProblem& problem, const Trajectory& traj, double tol = 1e-12);

/// Classical RK4 with u held constant over the step.
Vector rk4_step(const ContinuousDynamics& ode, double dt, const Vector& x, const Vector& u);

/// Assembles a problem with the quadratic costs above (closed-form cost
/// derivatives registered) around the given discrete dynamics.
ControlProblem quadratic_cost_problem(const QuadraticCostParams& params, Dynamics dynamics,
                                      int horizon, int control_dim);

}  // namespace spdp
