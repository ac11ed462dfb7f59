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

#include "spdp/ddp.hpp"

#include <algorithm>
#include <stdexcept>

#include "spdp/errors.hpp"
#include "spdp/kernels.hpp"

namespace spdp {

namespace {

Matrix sym(const Matrix& M) { return 0.5 * (M + M.transpose()); }

}  // namespace

QCoefficients taylor_q_coefficients(double stage_cost, const StageDerivatives& derivs,
                                    const QuadraticValue& next, const Vector& f_val,
                                    const Vector& x_next) {
  const CostExpansion& L = derivs.cost;
  const DynamicsExpansion& F = derivs.dynamics;
  const Vector defect = f_val - x_next;
  // -v_{k+1} + S_{k+1} (f_k - x_hat_{k+1})
  const Vector w = -next.v + next.S * defect;

  QCoefficients q;
  q.Q0 = stage_cost + next.V0 - next.v.dot(defect) + 0.5 * defect.dot(next.S * defect);
  q.Q_x = L.L_x + F.F_x.transpose() * w;
  q.Q_u = L.L_u + F.F_u.transpose() * w;
  q.Q_xx = L.L_xx + F.F_x.transpose() * next.S * F.F_x;
  q.Q_xu = L.L_xu + F.F_x.transpose() * next.S * F.F_u;
  q.Q_uu = L.L_uu + F.F_u.transpose() * next.S * F.F_u;
  for (std::size_t m = 0; m < F.F_xx.size(); ++m) {
    const double wm = w(static_cast<Eigen::Index>(m));
    q.Q_xx += wm * F.F_xx[m];
    q.Q_xu += wm * F.F_xu[m];
    q.Q_uu += wm * F.F_uu[m];
  }
  q.Q_xx = sym(q.Q_xx);
  q.Q_uu = sym(q.Q_uu);
  return q;
}

Gains compute_gains(const QCoefficients& q, double beta, int step) {
  if (beta < 0.0) throw std::invalid_argument("compute_gains: beta must be >= 0");
  const Eigen::Index s = q.Q_uu.rows();
  Gains g;
  g.regularized_Quu = q.Q_uu + beta * Matrix::Identity(s, s);
  Eigen::LLT<Matrix> llt(g.regularized_Quu);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(step);
  g.d = -llt.solve(q.Q_u);
  g.K = llt.solve(q.Q_ux());
  if (!g.d.allFinite() || !g.K.allFinite()) throw NotPositiveDefinite(step);
  return g;
}

QuadraticValue value_update(const QCoefficients& q, const Gains& gains) {
  const Vector& d = gains.d;
  const Matrix& K = gains.K;
  const Matrix Q_ux = q.Q_ux();
  QuadraticValue V;
  V.V0 = q.Q0 + d.dot(q.Q_u) + 0.5 * d.dot(q.Q_uu * d);
  V.v = -q.Q_x + K.transpose() * (q.Q_uu * d) + K.transpose() * q.Q_u - Q_ux.transpose() * d;
  V.S = q.Q_xx + K.transpose() * q.Q_uu * K - K.transpose() * Q_ux - Q_ux.transpose() * K;
  V.S = sym(V.S);
  return V;
}

QuadraticValue value_update_unregularized(const QCoefficients& q, const Gains& gains) {
  QuadraticValue V;
  V.V0 = q.Q0 + 0.5 * gains.d.dot(q.Q_u);
  V.v = -q.Q_x - gains.K.transpose() * (q.Q_uu * gains.d);
  V.S = sym(q.Q_xx - gains.K.transpose() * q.Q_uu * gains.K);
  return V;
}

QuadraticValue backward_step(const QCoefficients& q, double beta, int k, GainSchedule& schedule) {
  const Gains g = compute_gains(q, beta, k);
  const auto i = static_cast<std::size_t>(k);
  schedule.d[i] = g.d;
  schedule.K[i] = g.K;
  schedule.d_dot_Qu += g.d.dot(q.Q_u);
  schedule.d_Quu_d += g.d.dot(q.Q_uu * g.d);
  return value_update(q, g);
}

BackwardResult ddp_backward(const ControlProblem& problem, const Trajectory& nominal, double beta,
                            DerivativeProvider provider, Execution exec) {
  const int T = problem.horizon;
  if (static_cast<int>(nominal.states.size()) != T ||
      static_cast<int>(nominal.controls.size()) != T - 1) {
    throw std::invalid_argument("ddp_backward: nominal trajectory does not match the horizon");
  }

  const StageBatch batch = evaluate_stage_derivatives(problem, nominal, provider, exec);

  BackwardResult out;
  out.gains.beta = beta;
  out.gains.d.resize(static_cast<std::size_t>(T - 1));
  out.gains.K.resize(static_cast<std::size_t>(T - 1));
  out.values.resize(static_cast<std::size_t>(T));

  const TerminalDerivatives term = terminal_derivatives(problem, nominal.states.back(), provider);
  QuadraticValue& VT = out.values.back();
  VT.V0 = term.value;
  VT.v = -term.L_x;
  VT.S = term.L_xx;

  for (int k = T - 2; k >= 0; --k) {
    const auto i = static_cast<std::size_t>(k);
    const QCoefficients q = taylor_q_coefficients(batch.stage_costs[i], batch.derivatives[i],
                                                  out.values[i + 1], batch.next_states[i],
                                                  nominal.states[i + 1]);
    out.values[i] = backward_step(q, beta, k, out.gains);
  }
  return out;
}

}  // namespace spdp
