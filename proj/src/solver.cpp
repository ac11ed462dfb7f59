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

#include "spdp/solver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "spdp/errors.hpp"

namespace spdp {

RuleSpec RuleSpec::parse(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != ':' && c != '-' && c != '_') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  auto number = [&](std::size_t from) {
    if (t.size() <= from) throw std::invalid_argument("rule '" + text + "' is missing its order");
    std::size_t used = 0;
    const int v = std::stoi(t.substr(from), &used);
    if (from + used != t.size()) throw std::invalid_argument("rule '" + text + "' is malformed");
    return v;
  };
  RuleSpec spec;
  if (t.rfind("gh", 0) == 0) {
    spec = gauss_hermite(number(2));
    if (spec.parameter < 1) throw std::invalid_argument("Gauss-Hermite order must be >= 1");
  } else if (t.rfind("ut", 0) == 0) {
    spec = cubature(number(2));
    if (spec.parameter != 3 && spec.parameter != 5 && spec.parameter != 7) {
      throw std::invalid_argument("cubature degree must be 3, 5 or 7");
    }
  } else {
    throw std::invalid_argument("unknown rule '" + text + "' (expected ghP or utD)");
  }
  return spec;
}

std::string RuleSpec::label() const {
  return (family == Family::gauss_hermite ? "GH" : "UT") + std::to_string(parameter);
}

SigmaRule RuleSpec::make(int dim, std::size_t max_points) const {
  return family == Family::gauss_hermite ? gauss_hermite_rule(dim, parameter, max_points)
                                         : cubature_rule(dim, parameter);
}

std::size_t RuleSpec::point_count(int dim) const {
  return family == Family::gauss_hermite ? gauss_hermite_point_count(dim, parameter)
                                         : cubature_point_count(dim, parameter);
}

std::string to_string(Method m) { return m == Method::ddp ? "DDP" : "SPDP"; }

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "Converged";
    case SolveStatus::max_iter:
      return "MaxIter";
    case SolveStatus::exhausted:
      return "Exhausted";
  }
  return "Unknown";
}

void SolverConfig::validate() const {
  if (!(nu > 1.0)) throw std::invalid_argument("SolverConfig: nu must be > 1");
  if (!(eps_min > 0.0 && eps_min <= 1.0)) throw std::invalid_argument("SolverConfig: eps_min must be in (0, 1]");
  if (!(tol_rel_cost > 0.0)) throw std::invalid_argument("SolverConfig: tol_rel_cost must be > 0");
  if (beta0 < 0.0 || beta_min < 0.0 || !(beta_max > 0.0)) {
    throw std::invalid_argument("SolverConfig: regularization bounds must be non-negative");
  }
  if (max_iter < 0) throw std::invalid_argument("SolverConfig: max_iter must be >= 0");
  if (armijo < 0.0 || armijo >= 1.0) throw std::invalid_argument("SolverConfig: armijo must be in [0, 1)");
  if (method == Method::spdp && (!(sigma2_stage > 0.0) || !(sigma2_terminal > 0.0))) {
    throw std::invalid_argument("SolverConfig: SPDP variances must be positive");
  }
}

Trajectory forward_pass(const ControlProblem& problem, const Trajectory& nominal,
                        const GainSchedule& gains, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("forward_pass: eps must be in [0, 1]");
  const int steps = problem.num_controls();
  Trajectory out;
  out.states.reserve(nominal.states.size());
  out.controls.reserve(nominal.controls.size());
  out.states.push_back(nominal.states.front());
  for (int k = 0; k < steps; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Vector dx = out.states[i] - nominal.states[i];
    Vector u = nominal.controls[i] + eps * gains.d[i] - gains.K[i] * dx;
    Vector next = problem.dynamics(k, out.states[i], u);
    if (!u.allFinite() || !next.allFinite()) {
      throw NonFiniteError("forward pass diverged at step " + std::to_string(k), k, next);
    }
    out.controls.push_back(std::move(u));
    out.states.push_back(std::move(next));
  }
  return out;
}

LineSearchResult line_search(const ControlProblem& problem, const Trajectory& nominal,
                             const GainSchedule& gains, double cost_old, double eps_min,
                             double armijo) {
  LineSearchResult result;
  for (double eps = 1.0; eps >= eps_min; eps *= 0.5) {
    try {
      Trajectory candidate = forward_pass(problem, nominal, gains, eps);
      const double cost = total_cost(problem, candidate);
      const bool decrease = armijo > 0.0 ? cost - cost_old < armijo * gains.expected_change(eps)
                                         : cost < cost_old;
      if (decrease) {
        result.accepted = true;
        result.trajectory = std::move(candidate);
        result.cost = cost;
        result.epsilon = eps;
        return result;
      }
    } catch (const NonFiniteError&) {
      // a diverging step counts as a failed trial
    }
  }
  return result;
}

double lm_adapt(double beta, bool accepted, double nu, double beta_min, double beta_max) {
  if (beta < 0.0) throw std::invalid_argument("lm_adapt: beta must be >= 0");
  if (!(nu > 1.0)) throw std::invalid_argument("lm_adapt: nu must be > 1");
  const double next = accepted ? std::max(beta / nu, beta_min) : std::max(beta, beta_min) * nu;
  if (next > beta_max) throw RegularizationExhausted(next);
  return next;
}

namespace {

RulePair make_rules(const ControlProblem& problem, const SolverConfig& config) {
  return RulePair{config.rule.make(problem.state_dim),
                  config.rule.make(problem.state_dim + problem.control_dim)};
}

BackwardResult run_backward(const ControlProblem& problem, const Trajectory& nominal,
                            const SolverConfig& config, const RulePair* rules,
                            const CovarianceSchedule* schedule, double beta) {
  if (config.method == Method::ddp) {
    return ddp_backward(problem, nominal, beta, config.provider, config.execution);
  }
  return fhdp_backward(problem, nominal, *schedule, *rules, beta, config.execution);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BackwardResult backward_pass(const ControlProblem& problem, const Trajectory& nominal,
                             const SolverConfig& config, double beta) {
  if (config.method == Method::ddp) return run_backward(problem, nominal, config, nullptr, nullptr, beta);
  const RulePair rules = make_rules(problem, config);
  const CovarianceSchedule schedule = CovarianceSchedule::scaled(
      problem.state_dim, problem.control_dim, config.sigma2_stage, config.sigma2_terminal);
  return run_backward(problem, nominal, config, &rules, &schedule, beta);
}

SolveResult solve(const ControlProblem& problem, const Vector& x1,
                  const std::vector<Vector>& initial_controls, const SolverConfig& config) {
  problem.validate();
  config.validate();
  for (const Vector& u : initial_controls) {
    if (u.size() != problem.control_dim || !u.allFinite()) {
      throw std::invalid_argument("solve: initial controls must be finite s-vectors");
    }
  }

  std::optional<RulePair> rules;
  std::optional<CovarianceSchedule> schedule;
  if (config.method == Method::spdp) {
    rules.emplace(make_rules(problem, config));
    schedule.emplace(CovarianceSchedule::scaled(problem.state_dim, problem.control_dim,
                                                config.sigma2_stage, config.sigma2_terminal));
  }

  SolveResult result;
  result.trajectory = rollout(problem, x1, initial_controls);
  double J = total_cost(problem, result.trajectory);
  result.initial_cost = J;
  result.status = SolveStatus::max_iter;

  double beta = config.beta0;
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    IterationRecord rec;
    rec.iteration = iter;
    rec.beta = beta;

    const auto t_back = std::chrono::steady_clock::now();
    BackwardResult back;
    try {
      back = run_backward(problem, result.trajectory, config, rules ? &*rules : nullptr,
                          schedule ? &*schedule : nullptr, beta);
    } catch (const NotPositiveDefinite&) {
      rec.backward_seconds = seconds_since(t_back);
      rec.cost = J;
      rec.event = "not_pd";
      if (config.record_history) rec.controls = result.trajectory.controls;
      result.log.push_back(std::move(rec));
      try {
        beta = lm_adapt(beta, false, config.nu, config.beta_min, config.beta_max);
      } catch (const RegularizationExhausted& e) {
        result.status = SolveStatus::exhausted;
        result.message = e.what();
        break;
      }
      continue;
    }
    rec.backward_seconds = seconds_since(t_back);
    rec.terminal_evaluations = back.terminal_evaluations;
    rec.stage_evaluations_per_step =
        back.stage_evaluations / static_cast<std::size_t>(problem.num_controls());
    rec.expected_change = back.gains.expected_change(1.0);
    for (std::size_t k = 0; k < back.gains.d.size(); ++k) {
      rec.max_abs_d = std::max(rec.max_abs_d, back.gains.d[k].cwiseAbs().maxCoeff());
      rec.max_abs_K = std::max(rec.max_abs_K, back.gains.K[k].cwiseAbs().maxCoeff());
    }
    if (config.record_history) rec.gains = back.gains;

    // The model predicts no meaningful decrease: stationary point reached.
    if (std::abs(rec.expected_change) <= config.tol_rel_cost * std::max(1.0, std::abs(J))) {
      rec.cost = J;
      rec.event = "converged";
      if (config.record_history) rec.controls = result.trajectory.controls;
      result.log.push_back(std::move(rec));
      result.status = SolveStatus::converged;
      break;
    }

    const auto t_fwd = std::chrono::steady_clock::now();
    LineSearchResult ls = line_search(problem, result.trajectory, back.gains, J, config.eps_min,
                                      config.armijo);
    rec.forward_seconds = seconds_since(t_fwd);

    if (ls.accepted) {
      const double rel = (J - ls.cost) / std::max(1.0, std::abs(J));
      result.trajectory = std::move(ls.trajectory);
      J = ls.cost;
      rec.cost = J;
      rec.epsilon = ls.epsilon;
      rec.accepted = true;
      rec.event = "accepted";
      if (config.record_history) rec.controls = result.trajectory.controls;
      result.log.push_back(std::move(rec));
      beta = lm_adapt(beta, true, config.nu, config.beta_min, config.beta_max);
      if (rel < config.tol_rel_cost) {
        result.status = SolveStatus::converged;
        break;
      }
    } else {
      rec.cost = J;
      rec.event = "rejected";
      if (config.record_history) rec.controls = result.trajectory.controls;
      result.log.push_back(std::move(rec));
      try {
        beta = lm_adapt(beta, false, config.nu, config.beta_min, config.beta_max);
      } catch (const RegularizationExhausted& e) {
        result.status = SolveStatus::exhausted;
        result.message = e.what();
        break;
      }
    }
  }
  result.final_cost = J;
  return result;
}

}  // namespace spdp
