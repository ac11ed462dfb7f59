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

#include <cstddef>
#include <vector>

#include "spdp/derivatives.hpp"
#include "spdp/ocp.hpp"
#include "spdp/types.hpp"

namespace spdp {

enum class Execution { serial, parallel };

/// Local quadratic model of the action-value function around (x_hat, u_hat):
///
///   Q0 + Q_x^T dx + Q_u^T du + 1/2 [dx; du]^T [Q_xx Q_xu; Q_ux Q_uu] [dx; du]
///
/// Q_ux is Q_xu^T and is not stored.
struct QCoefficients {
  double Q0 = 0.0;
  Vector Q_x;
  Vector Q_u;
  Matrix Q_xx;
  Matrix Q_xu;
  Matrix Q_uu;

  Matrix Q_ux() const { return Q_xu.transpose(); }
};

/// V0 - v^T dx + 1/2 dx^T S dx. Note the minus sign on the linear term.
struct QuadraticValue {
  double V0 = 0.0;
  Vector v;
  Matrix S;
};

struct Gains {
  Vector d;  // -(Q_uu + beta I)^{-1} Q_u
  Matrix K;  //  (Q_uu + beta I)^{-1} Q_ux
  Matrix regularized_Quu;
};

/// Feedforward/feedback gains for every step, applied in the forward pass as
/// du_k = eps d_k - K_k dx_k.
struct GainSchedule {
  std::vector<Vector> d;
  std::vector<Matrix> K;
  double beta = 0.0;
  double d_dot_Qu = 0.0;     // sum_k d_k^T Q_u,k
  double d_Quu_d = 0.0;      // sum_k d_k^T Q_uu,k d_k

  /// Model-predicted change of the cost for line-search step eps.
  double expected_change(double eps) const { return eps * d_dot_Qu + 0.5 * eps * eps * d_Quu_d; }
};

struct BackwardResult {
  GainSchedule gains;
  std::vector<QuadraticValue> values;  // T entries, values[T-1] is terminal
  std::size_t terminal_evaluations = 0;  // sigma-point methods only
  std::size_t stage_evaluations = 0;     // total over all steps
};

/// Taylor coefficients of Q_k given the derivatives at the nominal point, the
/// next value model and the dynamics defect f_k(x_hat, u_hat) - x_hat_{k+1}.
QCoefficients taylor_q_coefficients(double stage_cost, const StageDerivatives& derivs,
                                    const QuadraticValue& next, const Vector& f_val,
                                    const Vector& x_next);

/// Throws NotPositiveDefinite(step) when Q_uu + beta I has no Cholesky factor.
Gains compute_gains(const QCoefficients& q, double beta, int step = -1);

/// Value model from the regularized gains:
///   V0 = Q0 + d^T Q_u + 1/2 d^T Q_uu d
///   v  = -Q_x + K^T Q_uu d + K^T Q_u - Q_ux^T d
///   S  = Q_xx + K^T Q_uu K - K^T Q_ux - Q_ux^T K
/// With beta = 0 this reduces to V0 = Q0 + 1/2 d^T Q_u, v = -Q_x - K^T Q_uu d,
/// S = Q_xx - K^T Q_uu K.
QuadraticValue value_update(const QCoefficients& q, const Gains& gains);

/// Unregularized closed forms (valid only for beta = 0); kept for testing.
QuadraticValue value_update_unregularized(const QCoefficients& q, const Gains& gains);

/// Derivative-based backward pass over a nominal trajectory.
BackwardResult ddp_backward(const ControlProblem& problem, const Trajectory& nominal, double beta,
                            DerivativeProvider provider = DerivativeProvider::analytic,
                            Execution exec = Execution::serial);

/// Shared tail of both backward passes: gains, bookkeeping and value update
/// for one step. Appends to the schedule.
QuadraticValue backward_step(const QCoefficients& q, double beta, int k, GainSchedule& schedule);

}  // namespace spdp
