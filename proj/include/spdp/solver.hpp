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

#include <optional>
#include <string>
#include <vector>

#include "spdp/ddp.hpp"
#include "spdp/derivatives.hpp"
#include "spdp/fhdp.hpp"
#include "spdp/ocp.hpp"
#include "spdp/quadrature.hpp"

namespace spdp {

/// Names a sigma-point rule family: "gh<p>" (Gauss-Hermite, p points per
/// axis) or "ut<d>" (symmetric cubature of degree d in {3, 5, 7}).
struct RuleSpec {
  enum class Family { gauss_hermite, cubature };

  Family family = Family::gauss_hermite;
  int parameter = 3;

  static RuleSpec gauss_hermite(int order) { return {Family::gauss_hermite, order}; }
  static RuleSpec cubature(int degree) { return {Family::cubature, degree}; }

  /// Accepts "gh3", "GH3", "ut5", "UT7", ... Throws std::invalid_argument.
  static RuleSpec parse(const std::string& text);

  std::string label() const;  // "GH3", "UT5"
  SigmaRule make(int dim, std::size_t max_points = kDefaultMaxPoints) const;
  std::size_t point_count(int dim) const;

  bool operator==(const RuleSpec&) const = default;
};

enum class Method { ddp, spdp };
enum class SolveStatus { converged, max_iter, exhausted };

std::string to_string(Method m);
std::string to_string(SolveStatus s);

struct SolverConfig {
  Method method = Method::ddp;
  RuleSpec rule = RuleSpec::gauss_hermite(3);
  double sigma2_stage = 1e-6;     // Sigma_k = sigma2_stage * I
  double sigma2_terminal = 1e-6;  // Sigma_T = sigma2_terminal * I

  double beta0 = 0.0;
  double nu = 10.0;  // Levenberg-Marquardt factor, > 1
  double beta_min = 1e-12;
  double beta_max = 1e10;
  double eps_min = 1e-4;  // smallest line-search step tried
  int max_iter = 200;
  double tol_rel_cost = 1e-9;
  double armijo = 0.0;  // 0: strict decrease; c > 0: require dJ < c * expected

  DerivativeProvider provider = DerivativeProvider::analytic;
  Execution execution = Execution::serial;
  bool record_history = false;  // keep controls and gains of every iteration

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;       // 1-based
  double cost = 0.0;       // total cost after this iteration
  double beta = 0.0;       // regularization used by the backward pass
  double epsilon = 0.0;    // accepted step, 0 when nothing was accepted
  bool accepted = false;
  std::string event;       // accepted | rejected | not_pd | converged
  double expected_change = 0.0;
  double backward_seconds = 0.0;
  double forward_seconds = 0.0;
  double max_abs_d = 0.0;
  double max_abs_K = 0.0;
  std::size_t terminal_evaluations = 0;    // per backward pass
  std::size_t stage_evaluations_per_step = 0;

  std::vector<Vector> controls;  // record_history only
  GainSchedule gains;            // record_history only
};

struct SolveResult {
  Trajectory trajectory;
  std::vector<IterationRecord> log;
  SolveStatus status = SolveStatus::max_iter;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  std::string message;
};

/// Rollout of the affine law u = u_hat + eps d - K (x - x_hat) from x_hat_1.
/// Throws NonFiniteError if the state leaves the finite range.
Trajectory forward_pass(const ControlProblem& problem, const Trajectory& nominal,
                        const GainSchedule& gains, double eps);

struct LineSearchResult {
  bool accepted = false;
  Trajectory trajectory;
  double cost = 0.0;
  double epsilon = 0.0;
};

/// Backtracking from eps = 1, halving until eps < eps_min.
LineSearchResult line_search(const ControlProblem& problem, const Trajectory& nominal,
                             const GainSchedule& gains, double cost_old, double eps_min,
                             double armijo = 0.0);

/// accepted: max(beta / nu, beta_min); rejected: max(beta, beta_min) * nu.
/// Throws RegularizationExhausted when the result exceeds beta_max.
double lm_adapt(double beta, bool accepted, double nu, double beta_min = 1e-12,
                double beta_max = 1e10);

/// Backward pass of the configured method at the given regularization.
BackwardResult backward_pass(const ControlProblem& problem, const Trajectory& nominal,
                             const SolverConfig& config, double beta);

SolveResult solve(const ControlProblem& problem, const Vector& x1,
                  const std::vector<Vector>& initial_controls, const SolverConfig& config);

}  // namespace spdp
