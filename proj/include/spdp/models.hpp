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

#include "spdp/ocp.hpp"
#include "spdp/types.hpp"

namespace spdp {

/// Damped pendulum, state (theta, theta_dot), theta = 0 hanging down:
///
///   theta_ddot = -(g l / a) sin(theta) - (b / a) theta_dot + u / a
struct PendulumParams {
  double a = 1.0;  // inertia-like scale
  double b = 0.1;  // damping
  double l = 1.0;
  double g = 9.81;

  void validate() const;
};

/// Frictionless cart-pole in the Barto, Sutton & Anderson (1983) form with
/// state (v, theta, v_dot, theta_dot) and theta = 0 hanging down, theta = pi
/// upright. With M = m_c + m_p and force F:
///
///   theta_ddot = [ -g sin(theta) + cos(theta) (F - m_p l theta_dot^2 sin(theta)) / M ]
///                / [ l (4/3 - m_p cos^2(theta) / M) ]
///   v_ddot     = [ F + m_p l (theta_ddot cos(theta) - theta_dot^2 sin(theta)) ] / M
///
/// This is the reference form with its angle measured from upright replaced
/// by theta - pi. l is the pivot-to-centre-of-mass distance (half the pole).
struct CartPoleParams {
  double m_c = 1.0;
  double m_p = 0.3;
  double l = 0.5;
  double g = 9.81;

  void validate() const;
};

Vector pendulum_ode(const PendulumParams& params, const Vector& x, const Vector& u);
Vector cartpole_ode(const CartPoleParams& params, const Vector& x, const Vector& u);

/// Discretization, horizon and diagonal cost weights of a benchmark.
struct BenchmarkSettings {
  double dt = 0.1;
  int horizon = 50;
  Vector W_diag;
  Vector W_T_diag;
  Vector R_diag;
  Vector x1;
  Vector x_goal;
};

BenchmarkSettings default_pendulum_settings();
BenchmarkSettings default_cartpole_settings();
BenchmarkSettings default_lqr_settings();

struct BenchmarkProblem {
  ControlProblem problem;
  Vector initial_state;
  QuadraticCostParams cost;
};

/// RK4-discretized pendulum swing-up from (0, 0) to (pi, 0).
BenchmarkProblem pendulum_benchmark(const PendulumParams& params = {},
                                    const BenchmarkSettings& settings = default_pendulum_settings());

/// RK4-discretized cart-pole swing-up from rest to (0, pi, 0, 0).
BenchmarkProblem cartpole_benchmark(const CartPoleParams& params = {},
                                    const BenchmarkSettings& settings = default_cartpole_settings());

/// Discretized double integrator with the same quadratic cost family; its
/// linear dynamics register exact derivatives.
struct LinearSystem {
  Matrix A;
  Matrix B;
};
LinearSystem lqr_test_system(double dt);
BenchmarkProblem lqr_benchmark(const BenchmarkSettings& settings = default_lqr_settings());

/// Linear dynamics x' = A x + B u wrapped as a problem with closed-form
/// derivatives.
BenchmarkProblem linear_quadratic_problem(const LinearSystem& sys, const QuadraticCostParams& cost,
                                          int horizon, const Vector& x1);

}  // namespace spdp
