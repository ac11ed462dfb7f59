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

#include "spdp/fhdp.hpp"

#include <stdexcept>
#include <string>

#include "spdp/errors.hpp"

namespace spdp {

namespace {

Matrix cholesky_lower(const Matrix& covariance, const char* what) {
  if (covariance.rows() != covariance.cols() || covariance.rows() < 1) {
    throw std::invalid_argument(std::string(what) + ": covariance must be square");
  }
  Eigen::LLT<Matrix> llt(0.5 * (covariance + covariance.transpose()));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string(what) + ": covariance is not positive definite");
  }
  return llt.matrixL();
}

Vector join(const Vector& x, const Vector& u) {
  Vector z(x.size() + u.size());
  z << x, u;
  return z;
}

}  // namespace

CovarianceSchedule::CovarianceSchedule(Matrix stage, Matrix terminal)
    : stage_(std::move(stage)),
      terminal_(std::move(terminal)),
      stage_chol_(cholesky_lower(stage_, "stage covariance")),
      terminal_chol_(cholesky_lower(terminal_, "terminal covariance")) {}

CovarianceSchedule CovarianceSchedule::scaled(int n, int s, double sigma2_stage,
                                              double sigma2_terminal) {
  if (!(sigma2_stage > 0.0) || !(sigma2_terminal > 0.0)) {
    throw std::invalid_argument("CovarianceSchedule: variances must be positive");
  }
  return CovarianceSchedule(sigma2_stage * Matrix::Identity(n + s, n + s),
                            sigma2_terminal * Matrix::Identity(n, n));
}

void CovarianceSchedule::set_stage_override(int k, Matrix covariance) {
  if (covariance.rows() != stage_.rows() || covariance.cols() != stage_.cols()) {
    throw std::invalid_argument("CovarianceSchedule: override has the wrong shape");
  }
  override_chols_[k] = cholesky_lower(covariance, "stage covariance override");
  overrides_[k] = std::move(covariance);
}

const Matrix& CovarianceSchedule::stage(int k) const {
  const auto it = overrides_.find(k);
  return it == overrides_.end() ? stage_ : it->second;
}

const Matrix& CovarianceSchedule::stage_chol(int k) const {
  const auto it = override_chols_.find(k);
  return it == override_chols_.end() ? stage_chol_ : it->second;
}

QuadraticValue fhdp_terminal_from_values(const Vector& values, const GaussianWindow& window,
                                         const SigmaRule& rule) {
  const FHCoefficients coef = fh_coefficients_from_values(values, rule);
  const QuadraticModel model = fh_quadratic_model(coef, window);
  QuadraticValue V;
  V.V0 = model.c0;
  V.v = -model.grad;
  V.S = model.hess;
  return V;
}

QuadraticValue fhdp_terminal(const TerminalCost& terminal_cost, const Vector& x_terminal,
                             const Matrix& covariance, const SigmaRule& rule) {
  if (rule.dim() != x_terminal.size()) {
    throw std::invalid_argument("fhdp_terminal: rule dimension must equal the state dimension");
  }
  const GaussianWindow window = GaussianWindow::from_covariance(x_terminal, covariance);
  const FHCoefficients coef = fh_coefficients(terminal_cost, window, rule);
  const QuadraticModel model = fh_quadratic_model(coef, window);
  QuadraticValue V;
  V.V0 = model.c0;
  V.v = -model.grad;
  V.S = model.hess;
  return V;
}

QCoefficients fhdp_q_from_images(const SigmaImages& images, const QuadraticValue& next,
                                 const Vector& x_next, const GaussianWindow& window,
                                 const SigmaRule& rule, int state_dim) {
  const auto m = static_cast<Eigen::Index>(rule.size());
  if (images.stage_costs.size() != m || images.next_states.cols() != m) {
    throw std::invalid_argument("fhdp_q_from_images: one image per sigma point required");
  }
  // q_i = l_i - v^T dz_i + 1/2 dz_i^T S dz_i; the constant V0 joins Q0 afterwards
  const Matrix dz = images.next_states.colwise() - x_next;
  const Matrix Sdz = next.S * dz;
  Vector q(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    q(i) = images.stage_costs(i) - next.v.dot(dz.col(i)) + 0.5 * dz.col(i).dot(Sdz.col(i));
  }
  const FHCoefficients coef = fh_coefficients_from_values(q, rule);
  const QuadraticModel model = fh_quadratic_model(coef, window);

  const int n = state_dim;
  const int s = window.dim() - n;
  QCoefficients out;
  out.Q0 = model.c0 + next.V0;
  out.Q_x = model.grad.head(n);
  out.Q_u = model.grad.tail(s);
  out.Q_xx = model.hess.topLeftCorner(n, n);
  out.Q_xu = model.hess.topRightCorner(n, s);
  out.Q_uu = model.hess.bottomRightCorner(s, s);
  return out;
}

QCoefficients fhdp_q_coefficients(const ControlProblem& problem, int k, const Vector& x_hat,
                                  const Vector& u_hat, const QuadraticValue& next,
                                  const Vector& x_next, const Matrix& covariance,
                                  const SigmaRule& rule) {
  const int n = problem.state_dim;
  if (rule.dim() != n + problem.control_dim) {
    throw std::invalid_argument("fhdp_q_coefficients: rule dimension must be n + s");
  }
  std::vector<GaussianWindow> windows{GaussianWindow::from_covariance(join(x_hat, u_hat), covariance)};
  // Evaluate through the batch kernel with a one-step view of the problem so
  // the step index passed to the callables is k.
  ControlProblem shifted = problem;
  shifted.dynamics = [&problem, k](int, const Vector& x, const Vector& u) {
    return problem.dynamics(k, x, u);
  };
  shifted.stage_cost = [&problem, k](int, const Vector& x, const Vector& u) {
    return problem.stage_cost(k, x, u);
  };
  EvalCounters counters;
  std::vector<SigmaImages> images;
  try {
    images = ref::evaluate_stage_sigma_images(shifted, windows, rule, counters);
  } catch (const NonFiniteError& e) {
    throw NonFiniteError(std::string(e.what()) + " (step " + std::to_string(k) + ")", k, e.point());
  }
  return fhdp_q_from_images(images.front(), next, x_next, windows.front(), rule, n);
}

BackwardResult fhdp_backward(const ControlProblem& problem, const Trajectory& nominal,
                             const CovarianceSchedule& schedule, const RulePair& rules,
                             double beta, Execution exec) {
  const int T = problem.horizon;
  const int n = problem.state_dim;
  const int s = problem.control_dim;
  if (static_cast<int>(nominal.states.size()) != T ||
      static_cast<int>(nominal.controls.size()) != T - 1) {
    throw std::invalid_argument("fhdp_backward: nominal trajectory does not match the horizon");
  }
  if (rules.terminal.dim() != n || rules.stage.dim() != n + s) {
    throw std::invalid_argument("fhdp_backward: rule dimensions must be n (terminal) and n + s (stage)");
  }

  std::vector<GaussianWindow> windows;
  windows.reserve(static_cast<std::size_t>(T - 1));
  for (int k = 0; k < T - 1; ++k) {
    const auto i = static_cast<std::size_t>(k);
    windows.emplace_back(join(nominal.states[i], nominal.controls[i]), schedule.stage_chol(k));
  }
  const GaussianWindow terminal_window(nominal.states.back(), schedule.terminal_chol());

  EvalCounters counters;
  const Vector terminal_values =
      evaluate_terminal_sigma_values(problem, terminal_window, rules.terminal, exec, counters);
  const std::vector<SigmaImages> images =
      evaluate_stage_sigma_images(problem, windows, rules.stage, exec, counters);

  BackwardResult out;
  out.gains.beta = beta;
  out.gains.d.resize(static_cast<std::size_t>(T - 1));
  out.gains.K.resize(static_cast<std::size_t>(T - 1));
  out.values.resize(static_cast<std::size_t>(T));
  out.values.back() = fhdp_terminal_from_values(terminal_values, terminal_window, rules.terminal);

  for (int k = T - 2; k >= 0; --k) {
    const auto i = static_cast<std::size_t>(k);
    const QCoefficients q = fhdp_q_from_images(images[i], out.values[i + 1], nominal.states[i + 1],
                                               windows[i], rules.stage, n);
    out.values[i] = backward_step(q, beta, k, out.gains);
  }
  out.terminal_evaluations = counters.terminal.load();
  out.stage_evaluations = counters.stage.load();
  return out;
}

}  // namespace spdp
