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

#include "spdp/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spdp {

void PendulumParams::validate() const {
  if (!(a > 0.0) || !(l > 0.0) || !(g > 0.0) || !(b >= 0.0)) {
    throw std::invalid_argument("PendulumParams: require a, l, g > 0 and b >= 0");
  }
}

void CartPoleParams::validate() const {
  if (!(m_c > 0.0) || !(m_p > 0.0) || !(l > 0.0) || !(g > 0.0)) {
    throw std::invalid_argument("CartPoleParams: all parameters must be positive");
  }
}

Vector pendulum_ode(const PendulumParams& p, const Vector& x, const Vector& u) {
  Vector xdot(2);
  xdot(0) = x(1);
  xdot(1) = -(p.g * p.l / p.a) * std::sin(x(0)) - (p.b / p.a) * x(1) + u(0) / p.a;
  return xdot;
}

Vector cartpole_ode(const CartPoleParams& p, const Vector& x, const Vector& u) {
  const double theta = x(1);
  const double theta_dot = x(3);
  const double F = u(0);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double M = p.m_c + p.m_p;

  const double theta_ddot = (-p.g * s + c * (F - p.m_p * p.l * theta_dot * theta_dot * s) / M) /
                            (p.l * (4.0 / 3.0 - p.m_p * c * c / M));
  const double v_ddot = (F + p.m_p * p.l * (theta_ddot * c - theta_dot * theta_dot * s)) / M;

  Vector xdot(4);
  xdot << x(2), theta_dot, v_ddot, theta_ddot;
  return xdot;
}

BenchmarkSettings default_pendulum_settings() {
  BenchmarkSettings s;
  s.dt = 0.1;
  s.horizon = 50;
  s.W_diag = Vector::Constant(2, 0.01);
  s.W_T_diag = Vector::Constant(2, 100.0);
  s.R_diag = Vector::Constant(1, 0.001);
  s.x1 = Vector::Zero(2);
  s.x_goal = Vector(2);
  s.x_goal << std::numbers::pi, 0.0;
  return s;
}

BenchmarkSettings default_cartpole_settings() {
  BenchmarkSettings s;
  s.dt = 0.1;
  s.horizon = 50;
  s.W_diag = Vector::Constant(4, 0.01);
  s.W_T_diag = Vector(4);
  s.W_T_diag << 100.0, 500.0, 100.0, 100.0;
  s.R_diag = Vector::Constant(1, 0.001);
  s.x1 = Vector::Zero(4);
  s.x_goal = Vector(4);
  s.x_goal << 0.0, std::numbers::pi, 0.0, 0.0;
  return s;
}

BenchmarkSettings default_lqr_settings() {
  BenchmarkSettings s;
  s.dt = 0.1;
  s.horizon = 20;
  s.W_diag = Vector::Constant(2, 1.0);
  s.W_T_diag = Vector::Constant(2, 10.0);
  s.R_diag = Vector::Constant(1, 0.1);
  s.x1 = Vector(2);
  s.x1 << 1.0, 0.0;
  s.x_goal = Vector::Zero(2);
  return s;
}

namespace {

QuadraticCostParams cost_from(const BenchmarkSettings& s) {
  QuadraticCostParams c;
  c.W = s.W_diag.asDiagonal();
  c.W_T = s.W_T_diag.asDiagonal();
  c.R = s.R_diag.asDiagonal();
  c.x_goal = s.x_goal;
  return c;
}

void check_settings(const BenchmarkSettings& s, int n, int m) {
  if (!(s.dt > 0.0)) throw std::invalid_argument("benchmark: dt must be positive");
  if (s.horizon < 2) throw std::invalid_argument("benchmark: horizon must be >= 2");
  if (s.W_diag.size() != n || s.W_T_diag.size() != n || s.x1.size() != n ||
      s.x_goal.size() != n || s.R_diag.size() != m) {
    throw std::invalid_argument("benchmark: weight or state vector has the wrong length");
  }
}

}  // namespace

BenchmarkProblem pendulum_benchmark(const PendulumParams& params, const BenchmarkSettings& s) {
  params.validate();
  check_settings(s, 2, 1);
  const double dt = s.dt;
  ContinuousDynamics ode = [params](const Vector& x, const Vector& u) {
    return pendulum_ode(params, x, u);
  };
  Dynamics f = [ode, dt](int, const Vector& x, const Vector& u) { return rk4_step(ode, dt, x, u); };
  BenchmarkProblem b{quadratic_cost_problem(cost_from(s), std::move(f), s.horizon, 1), s.x1,
                     cost_from(s)};
  return b;
}

BenchmarkProblem cartpole_benchmark(const CartPoleParams& params, const BenchmarkSettings& s) {
  params.validate();
  check_settings(s, 4, 1);
  const double dt = s.dt;
  ContinuousDynamics ode = [params](const Vector& x, const Vector& u) {
    return cartpole_ode(params, x, u);
  };
  Dynamics f = [ode, dt](int, const Vector& x, const Vector& u) { return rk4_step(ode, dt, x, u); };
  BenchmarkProblem b{quadratic_cost_problem(cost_from(s), std::move(f), s.horizon, 1), s.x1,
                     cost_from(s)};
  return b;
}

LinearSystem lqr_test_system(double dt) {
  LinearSystem sys;
  sys.A = Matrix(2, 2);
  sys.A << 1.0, dt, 0.0, 1.0;
  sys.B = Matrix(2, 1);
  sys.B << 0.5 * dt * dt, dt;
  return sys;
}

BenchmarkProblem linear_quadratic_problem(const LinearSystem& sys, const QuadraticCostParams& cost,
                                          int horizon, const Vector& x1) {
  const Matrix A = sys.A;
  const Matrix B = sys.B;
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || x1.size() != n) {
    throw std::invalid_argument("linear_quadratic_problem: shape mismatch");
  }
  Dynamics f = [A, B](int, const Vector& x, const Vector& u) -> Vector { return A * x + B * u; };
  ControlProblem p = quadratic_cost_problem(cost, std::move(f), horizon, static_cast<int>(m));
  p.dynamics_derivatives = [A, B, n, m](int, const Vector&, const Vector&) {
    DynamicsExpansion e;
    e.F_x = A;
    e.F_u = B;
    e.F_xx.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
    e.F_xu.assign(static_cast<std::size_t>(n), Matrix::Zero(n, m));
    e.F_uu.assign(static_cast<std::size_t>(n), Matrix::Zero(m, m));
    return e;
  };
  return BenchmarkProblem{std::move(p), x1, cost};
}

BenchmarkProblem lqr_benchmark(const BenchmarkSettings& s) {
  check_settings(s, 2, 1);
  return linear_quadratic_problem(lqr_test_system(s.dt), cost_from(s), s.horizon, s.x1);
}

}  // namespace spdp
