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

#include <map>
#include <vector>

#include "spdp/ddp.hpp"
#include "spdp/fourier_hermite.hpp"
#include "spdp/kernels.hpp"
#include "spdp/ocp.hpp"
#include "spdp/quadrature.hpp"

namespace spdp {

/// Joint (x, u) covariances for the stage windows and the state covariance
/// of the terminal window. Constant by default; individual steps may be
/// overridden.
class CovarianceSchedule {
 public:
  CovarianceSchedule(Matrix stage, Matrix terminal);

  /// sigma2_stage * I_{n+s} and sigma2_terminal * I_n.
  static CovarianceSchedule scaled(int n, int s, double sigma2_stage, double sigma2_terminal);

  void set_stage_override(int k, Matrix covariance);

  const Matrix& stage(int k) const;
  const Matrix& terminal() const { return terminal_; }

  /// Lower Cholesky factor of stage(k) (cached for the constant part).
  const Matrix& stage_chol(int k) const;
  const Matrix& terminal_chol() const { return terminal_chol_; }

 private:
  Matrix stage_;
  Matrix terminal_;
  Matrix stage_chol_;
  Matrix terminal_chol_;
  std::map<int, Matrix> overrides_;
  std::map<int, Matrix> override_chols_;
};

/// Sigma-point rules for the terminal (dim n) and stage (dim n + s) windows.
struct RulePair {
  SigmaRule terminal;
  SigmaRule stage;
};

/// Terminal value model from the FH expansion of l_T around x_hat_T:
/// V0 = a - tr(C)/2, v = -L^{-T} b, S = L^{-T} C L^{-1}.
QuadraticValue fhdp_terminal(const TerminalCost& terminal_cost, const Vector& x_terminal,
                             const Matrix& covariance, const SigmaRule& rule);

/// Same, from l_T already evaluated at the window's sigma points.
QuadraticValue fhdp_terminal_from_values(const Vector& values, const GaussianWindow& window,
                                         const SigmaRule& rule);

/// Action-value coefficients of step k from the FH expansion of
///   q(x, u) = l_k(x, u) + V0' - v'^T dz + 1/2 dz^T S' dz,  dz = f_k(x, u) - x_hat_{k+1}
/// over the joint window ([x_hat; u_hat], covariance).
QCoefficients fhdp_q_coefficients(const ControlProblem& problem, int k, const Vector& x_hat,
                                  const Vector& u_hat, const QuadraticValue& next,
                                  const Vector& x_next, const Matrix& covariance,
                                  const SigmaRule& rule);

/// Same, from precomputed sigma-point images of f_k and l_k.
QCoefficients fhdp_q_from_images(const SigmaImages& images, const QuadraticValue& next,
                                 const Vector& x_next, const GaussianWindow& window,
                                 const SigmaRule& rule, int state_dim);

/// Derivative-free backward pass. Evaluation counts are reported in the result.
BackwardResult fhdp_backward(const ControlProblem& problem, const Trajectory& nominal,
                             const CovarianceSchedule& schedule, const RulePair& rules,
                             double beta, Execution exec = Execution::serial);

}  // namespace spdp
