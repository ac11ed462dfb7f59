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

#include "spdp/ocp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spdp/errors.hpp"

namespace spdp {

void ControlProblem::validate() const {
  if (horizon < 2) throw std::invalid_argument("ControlProblem: horizon must be >= 2");
  if (state_dim < 1) throw std::invalid_argument("ControlProblem: state_dim must be >= 1");
  if (control_dim < 1) throw std::invalid_argument("ControlProblem: control_dim must be >= 1");
  if (!dynamics || !stage_cost || !terminal_cost) {
    throw std::invalid_argument("ControlProblem: dynamics and costs are required");
  }
}

void QuadraticCostParams::validate() const {
  const Eigen::Index n = x_goal.size();
  if (W.rows() != n || W.cols() != n || W_T.rows() != n || W_T.cols() != n) {
    throw std::invalid_argument("QuadraticCostParams: state weight shape mismatch");
  }
  if (R.rows() != R.cols() || R.rows() < 1) {
    throw std::invalid_argument("QuadraticCostParams: R must be square");
  }
  auto symmetric = [](const Matrix& M) { return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12; };
  if (!symmetric(W) || !symmetric(W_T) || !symmetric(R)) {
    throw std::invalid_argument("QuadraticCostParams: weights must be symmetric");
  }
  Eigen::LLT<Matrix> llt(R);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("QuadraticCostParams: R must be positive definite");
  }
}

Trajectory rollout(const ControlProblem& problem, const Vector& x1,
                   const std::vector<Vector>& controls) {
  if (static_cast<int>(controls.size()) != problem.num_controls()) {
    throw std::invalid_argument("rollout: expected " + std::to_string(problem.num_controls()) +
                                " controls, got " + std::to_string(controls.size()));
  }
  if (x1.size() != problem.state_dim) throw std::invalid_argument("rollout: bad x1 dimension");
  Trajectory traj;
  traj.controls = controls;
  traj.states.reserve(static_cast<std::size_t>(problem.horizon));
  traj.states.push_back(x1);
  for (int k = 0; k < problem.num_controls(); ++k) {
    Vector next = problem.dynamics(k, traj.states.back(), controls[static_cast<std::size_t>(k)]);
    if (!next.allFinite()) {
      throw NonFiniteError("rollout: non-finite state after step " + std::to_string(k), k, next);
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

double total_cost(const ControlProblem& problem, const Trajectory& traj) {
  if (static_cast<int>(traj.states.size()) != problem.horizon ||
      static_cast<int>(traj.controls.size()) != problem.num_controls()) {
    throw std::invalid_argument("total_cost: trajectory length does not match the horizon");
  }
  double J = problem.terminal_cost(traj.states.back());
  if (!std::isfinite(J)) {
    throw NonFiniteError("total_cost: non-finite terminal cost", problem.horizon - 1,
                         traj.states.back());
  }
  for (int k = 0; k < problem.num_controls(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double l = problem.stage_cost(k, traj.states[i], traj.controls[i]);
    if (!std::isfinite(l)) {
      throw NonFiniteError("total_cost: non-finite stage cost at step " + std::to_string(k), k,
                           traj.states[i]);
    }
    J += l;
  }
  return J;
}

bool is_consistent(const ControlProblem& problem, const Trajectory& traj, double tol) {
  if (static_cast<int>(traj.states.size()) != problem.horizon ||
      static_cast<int>(traj.controls.size()) != problem.num_controls()) {
    return false;
  }
  for (int k = 0; k < problem.num_controls(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Vector next = problem.dynamics(k, traj.states[i], traj.controls[i]);
    if ((next - traj.states[i + 1]).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

Vector rk4_step(const ContinuousDynamics& ode, double dt, const Vector& x, const Vector& u) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  const Vector k1 = ode(x, u);
  const Vector k2 = ode(x + 0.5 * dt * k1, u);
  const Vector k3 = ode(x + 0.5 * dt * k2, u);
  const Vector k4 = ode(x + dt * k3, u);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

ControlProblem quadratic_cost_problem(const QuadraticCostParams& params, Dynamics dynamics,
                                      int horizon, int control_dim) {
  params.validate();
  if (params.R.rows() != control_dim) {
    throw std::invalid_argument("quadratic_cost_problem: R does not match control_dim");
  }
  ControlProblem p;
  p.horizon = horizon;
  p.state_dim = static_cast<int>(params.x_goal.size());
  p.control_dim = control_dim;
  p.dynamics = std::move(dynamics);

  const Matrix W = params.W;
  const Matrix W_T = params.W_T;
  const Matrix R = params.R;
  const Vector xg = params.x_goal;

  p.stage_cost = [W, R, xg](int, const Vector& x, const Vector& u) {
    const Vector dx = x - xg;
    return 0.5 * dx.dot(W * dx) + u.dot(R * u);
  };
  p.terminal_cost = [W_T, xg](const Vector& x) {
    const Vector dx = x - xg;
    return 0.5 * dx.dot(W_T * dx);
  };
  p.stage_cost_derivatives = [W, R, xg](int, const Vector& x, const Vector& u) {
    CostExpansion e;
    e.L_x = W * (x - xg);
    e.L_u = 2.0 * (R * u);
    e.L_xx = W;
    e.L_xu = Matrix::Zero(x.size(), u.size());
    e.L_uu = 2.0 * R;
    return e;
  };
  p.terminal_cost_derivatives = [W_T, xg](const Vector& x) {
    TerminalExpansion e;
    const Vector dx = x - xg;
    e.value = 0.5 * dx.dot(W_T * dx);
    e.L_x = W_T * dx;
    e.L_xx = W_T;
    return e;
  };
  p.validate();
  return p;
}

}  // namespace spdp
