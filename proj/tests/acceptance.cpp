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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spdp/experiment.hpp"
#include "spdp/fourier_hermite.hpp"
#include "spdp/quadrature.hpp"
#include "spdp/riccati.hpp"
#include "spdp/solver.hpp"
#include "support/oracles.hpp"

namespace {

using namespace spdp;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

BenchmarkProblem fixture(ProblemKind kind) {
  ExperimentConfig c;
  c.problem = kind;
  return build_problem(c);
}

std::vector<Vector> zero_controls(const ControlProblem& p) {
  return std::vector<Vector>(static_cast<std::size_t>(p.num_controls()),
                             Vector::Zero(p.control_dim));
}

SolveResult run(const BenchmarkProblem& b, SolverConfig cfg) {
  return solve(b.problem, b.initial_state, zero_controls(b.problem), cfg);
}

SolverConfig spdp_config(RuleSpec rule, double sigma2) {
  SolverConfig c;
  c.method = Method::spdp;
  c.rule = rule;
  c.sigma2_stage = sigma2;
  c.sigma2_terminal = sigma2;
  return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// 1. Sigma-point counts read from the evaluation counters of one backward pass.
Outcome point_counts() {
  Outcome o;
  struct Row {
    ProblemKind problem;
    RuleSpec rule;
    std::size_t m_T, m_k;
  };
  const std::vector<Row> rows = {
      {ProblemKind::pendulum, RuleSpec::gauss_hermite(3), 9, 27},
      {ProblemKind::pendulum, RuleSpec::cubature(5), 9, 19},
      {ProblemKind::pendulum, RuleSpec::cubature(7), 17, 45},
      {ProblemKind::cartpole, RuleSpec::gauss_hermite(3), 81, 243},
      {ProblemKind::cartpole, RuleSpec::cubature(5), 33, 51},
      {ProblemKind::cartpole, RuleSpec::cubature(7), 97, 181},
  };
  for (const auto& r : rows) {
    BenchmarkProblem b = fixture(r.problem);
    Trajectory nominal = rollout(b.problem, b.initial_state, zero_controls(b.problem));
    BackwardResult back = backward_pass(b.problem, nominal, spdp_config(r.rule, 1e-6), 0.0);
    const std::size_t steps = static_cast<std::size_t>(b.problem.num_controls());
    const bool ok = back.terminal_evaluations == r.m_T &&
                    back.stage_evaluations == r.m_k * steps;
    o.detail << ' ' << to_string(r.problem) << '/' << r.rule.label() << "=("
             << back.terminal_evaluations << ',' << back.stage_evaluations / steps << ')';
    o.require(ok, to_string(r.problem) + " " + r.rule.label());
  }
  return o;
}

// 2. Every generated rule integrates unit-Gaussian monomials up to its degree.
Outcome quadrature_exactness() {
  Outcome o;
  double worst = 0.0;
  int rules = 0;
  for (int dim = 1; dim <= 4; ++dim) {
    std::vector<SigmaRule> generated;
    for (int p = 1; p <= 5; ++p) generated.push_back(gauss_hermite_rule(dim, p));
    for (int d : {3, 5, 7}) generated.push_back(cubature_rule(dim, d));
    for (const auto& rule : generated) {
      ++rules;
      for (const auto& e : oracle::monomials_up_to(dim, rule.exactness_degree())) {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
          double t = rule.weight(i);
          for (int a = 0; a < dim; ++a) t *= std::pow(rule.point(i)(a), e[static_cast<std::size_t>(a)]);
          q += t;
        }
        double err = std::abs(q - oracle::unit_gaussian_moment(e));
        worst = std::max(worst, err);
        if (err > 1e-9) o.require(false, rule.name() + " dim " + std::to_string(dim));
      }
    }
  }
  o.detail << ' ' << rules << " rules, max error " << worst;
  return o;
}

// 3. Quadratics are reproduced exactly by the FH model at the window mean.
Outcome fh_quadratic_exactness() {
  Outcome o;
  std::mt19937_64 rng(20261015);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + trial % 6;
    Matrix H = oracle::random_spd(dim, 0.1, 2.0, rng) - Matrix::Identity(dim, dim);
    Vector g = oracle::random_vector(dim, 1.0, rng);
    const double c = oracle::random_vector(1, 1.0, rng)(0);
    ScalarField f = [&](const Vector& y) { return c + g.dot(y) + 0.5 * y.dot(H * y); };
    Vector mu = oracle::random_vector(dim, 1.0, rng);
    GaussianWindow w = GaussianWindow::from_covariance(mu, oracle::random_spd(dim, 0.05, 2.0, rng));
    const SigmaRule rule = trial % 2 ? cubature_rule(dim, 5) : gauss_hermite_rule(dim, 3);
    QuadraticModel m = fh_quadratic_model(fh_coefficients(f, w, rule), w);
    worst = std::max({worst, std::abs(m.c0 - f(mu)), (m.grad - (g + H * mu)).cwiseAbs().maxCoeff(),
                      (m.hess - H).cwiseAbs().maxCoeff()});
  }
  o.detail << " max error " << worst;
  o.require(worst <= 1e-8, "tolerance 1e-8");
  return o;
}

// 4. FH terms of a quartic equal the Taylor terms of its Gaussian smoothing.
Outcome smoothing_identity() {
  Outcome o;
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 3;
    oracle::Polynomial p = oracle::random_polynomial(dim, 4, rng);
    Matrix S = oracle::random_spd(dim, 0.05, 1.0, rng);
    Vector mu = oracle::random_vector(dim, 1.0, rng);
    oracle::Polynomial pbar = p.smoothed(S);
    GaussianWindow w = GaussianWindow::from_covariance(mu, S);
    ScalarField f = [&](const Vector& y) { return p(y); };
    QuadraticModel m = fh_quadratic_model(fh_coefficients(f, w, gauss_hermite_rule(dim, 4)), w);
    Matrix Hbar = pbar.hessian(mu);
    const double offset = pbar(mu) - 0.5 * (Hbar * S).trace();
    worst = std::max({worst, (m.grad - pbar.gradient(mu)).cwiseAbs().maxCoeff(),
                      (m.hess - Hbar).cwiseAbs().maxCoeff(), std::abs(m.c0 - offset)});
  }
  o.detail << " max error " << worst;
  o.require(worst <= 1e-8, "tolerance 1e-8");
  return o;
}

// 5. DDP and SPDP reach the Riccati optimum of the linear-quadratic fixture.
Outcome lqr_equivalence() {
  Outcome o;
  BenchmarkProblem b = fixture(ProblemKind::lqr_test);
  const BenchmarkSettings s = default_lqr_settings();
  const LinearSystem sys = lqr_test_system(s.dt);
  const RiccatiSolution ric =
      riccati_lqr(sys.A, sys.B, b.cost.W, b.cost.W_T, b.cost.R, b.problem.horizon, b.initial_state);

  SolverConfig ddp_cfg;
  ddp_cfg.record_history = true;
  const SolveResult ddp = run(b, ddp_cfg);

  auto check = [&](const std::string& name, const SolveResult& r) {
    o.require(r.status == SolveStatus::converged && r.log.size() <= 2,
              name + " iterations " + std::to_string(r.log.size()));
    o.require(rel(r.final_cost, ric.cost) <= 1e-8, name + " cost");
    double gain_gap = 0.0;
    for (const auto& rec : r.log) {
      for (std::size_t k = 0; k < rec.gains.K.size(); ++k) {
        gain_gap = std::max(gain_gap, (rec.gains.K[k] - ric.gains[k]).cwiseAbs().maxCoeff());
      }
    }
    for (std::size_t i = 0; i < r.log.size() && i < ddp.log.size(); ++i) {
      for (std::size_t k = 0; k < r.log[i].gains.d.size(); ++k) {
        gain_gap = std::max(gain_gap,
                            (r.log[i].gains.d[k] - ddp.log[i].gains.d[k]).cwiseAbs().maxCoeff());
      }
    }
    o.require(gain_gap <= 1e-8, name + " gains " + std::to_string(gain_gap));
    return gain_gap;
  };

  double worst_gap = check("DDP", ddp);
  double worst_cost = rel(ddp.final_cost, ric.cost);
  for (RuleSpec rule : {RuleSpec::cubature(5), RuleSpec::cubature(7), RuleSpec::gauss_hermite(3)}) {
    for (double sigma2 : {1e-6, 1e-2, 1.0}) {
      SolverConfig c = spdp_config(rule, sigma2);
      c.record_history = true;
      const SolveResult r = run(b, c);
      std::ostringstream name;
      name << rule.label() << "@" << sigma2;
      worst_gap = std::max(worst_gap, check(name.str(), r));
      worst_cost = std::max(worst_cost, rel(r.final_cost, ric.cost));
    }
  }
  o.detail << " riccati cost " << ric.cost << ", max rel cost gap " << worst_cost
           << ", max gain gap " << worst_gap;
  return o;
}

// 6. With a tiny window SPDP coincides with DDP on the pendulum.
Outcome small_covariance() {
  Outcome o;
  BenchmarkProblem b = fixture(ProblemKind::pendulum);
  const SolveResult ddp = run(b, SolverConfig{});
  const SolveResult sp = run(b, spdp_config(RuleSpec::gauss_hermite(3), 1e-6));
  const double gap = oracle::max_control_gap(ddp.trajectory.controls, sp.trajectory.controls);
  const double cost_gap = std::abs(sp.final_cost - ddp.final_cost) / std::abs(ddp.final_cost);
  o.detail << " control gap " << gap << ", relative cost gap " << cost_gap;
  o.require(gap <= 1e-3, "controls");
  o.require(cost_gap <= 1e-3, "cost");
  return o;
}

// 7. A degree-3 rule is not enough; degree >= 5 rules match DDP.
Outcome third_order_inadequate() {
  Outcome o;
  BenchmarkProblem b = fixture(ProblemKind::pendulum);
  const double ref = run(b, SolverConfig{}).final_cost;
  const SolveResult ut3 = run(b, spdp_config(RuleSpec::cubature(3), 1e-6));
  const bool failed = ut3.status != SolveStatus::converged || ut3.final_cost >= 1.1 * ref;
  o.detail << " DDP " << ref << ", UT3 " << ut3.final_cost << " (" << to_string(ut3.status) << ")";
  o.require(failed, "UT3 matched DDP");
  for (RuleSpec rule : {RuleSpec::cubature(5), RuleSpec::cubature(7), RuleSpec::gauss_hermite(3)}) {
    const SolveResult r = run(b, spdp_config(rule, 1e-6));
    o.detail << ", " << rule.label() << ' ' << r.final_cost;
    o.require(std::abs(r.final_cost - ref) <= 0.01 * std::abs(ref), rule.label());
  }
  return o;
}

// 8. Accepted iterations strictly decrease the cost.
Outcome monotone_descent() {
  Outcome o;
  int runs = 0;
  std::size_t accepted = 0;
  for (ProblemKind kind : {ProblemKind::pendulum, ProblemKind::cartpole}) {
    BenchmarkProblem b = fixture(kind);
    std::vector<std::pair<std::string, SolverConfig>> configs = {{"DDP", SolverConfig{}}};
    for (RuleSpec rule : {RuleSpec::cubature(5), RuleSpec::cubature(7), RuleSpec::gauss_hermite(3)}) {
      configs.emplace_back(rule.label(), spdp_config(rule, 1e-6));
    }
    for (const auto& [name, cfg] : configs) {
      ++runs;
      const SolveResult r = run(b, cfg);
      double prev = r.initial_cost;
      for (const auto& rec : r.log) {
        if (!rec.accepted) continue;
        ++accepted;
        o.require(rec.cost < prev, to_string(kind) + " " + name + " iteration " +
                                       std::to_string(rec.iteration));
        prev = rec.cost;
      }
    }
  }
  o.detail << ' ' << runs << " runs, " << accepted << " accepted iterations";
  return o;
}

// Error sequence e_i = max |u^(i) - u*| over accepted iterations. u* is the
// fixed point of the full-step map (backward pass, forward pass with eps = 1)
// started from the converged controls.
std::vector<double> tail_errors(const BenchmarkProblem& b, SolverConfig cfg) {
  cfg.record_history = true;
  cfg.tol_rel_cost = 1e-15;
  const SolveResult r = run(b, cfg);
  Trajectory star = r.trajectory;
  for (int i = 0; i < 10; ++i) {
    const BackwardResult back = backward_pass(b.problem, star, cfg, 0.0);
    star = forward_pass(b.problem, star, back.gains, 1.0);
  }
  std::vector<double> e;
  for (const auto& rec : r.log) {
    if (rec.accepted) e.push_back(oracle::max_control_gap(rec.controls, star.controls));
  }
  return e;
}

// log e_{i+1} / log e_i for every e_i in [1e-6, 1e-2] with e_{i+1} > 0.
std::vector<double> order_ratios(const std::vector<double>& e) {
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    if (e[i] < 1e-6 || e[i] > 1e-2 || e[i + 1] <= 0.0) continue;
    ratios.push_back(std::log(e[i + 1]) / std::log(e[i]));
  }
  return ratios;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

// 9. Tail of the iteration converges at order >= 1.5.
Outcome quadratic_convergence() {
  Outcome o;
  BenchmarkProblem b = fixture(ProblemKind::pendulum);

  const std::vector<double> ddp = order_ratios(tail_errors(b, SolverConfig{}));
  int streak = 0, best = 0;
  for (double r : ddp) {
    streak = r >= 1.5 ? streak + 1 : 0;
    best = std::max(best, streak);
  }
  o.detail << " DDP ratios {" << join(ddp) << "}";
  o.require(best >= 2, "DDP: fewer than two consecutive steps of order >= 1.5");

  // The sigma-point iteration jumps across the window in one step, so only
  // the order of the steps it does take inside the window can be checked.
  const std::vector<double> spe = tail_errors(b, spdp_config(RuleSpec::gauss_hermite(3), 1e-6));
  const std::vector<double> sp = order_ratios(spe);
  o.detail << ", SPDP-GH3 ratios {" << join(sp) << "}";
  o.require(!sp.empty() && std::all_of(sp.begin(), sp.end(), [](double r) { return r >= 1.5; }),
            "SPDP-GH3 order below 1.5");
  return o;
}

// 10. Wider windows never reach the common final cost in fewer iterations.
Outcome covariance_ordering() {
  Outcome o;
  BenchmarkProblem b = fixture(ProblemKind::pendulum);
  const std::vector<double> sigmas = {1e-6, 1e-3, 1e-1};
  std::vector<SolveResult> runs;
  double target = std::numeric_limits<double>::infinity();
  for (double sigma2 : sigmas) {
    runs.push_back(run(b, spdp_config(RuleSpec::gauss_hermite(3), sigma2)));
    target = std::min(target, runs.back().final_cost);
  }
  auto first_within = [](const SolveResult& r, double ref) {
    for (const auto& rec : r.log) {
      if (std::abs(rec.cost - ref) <= 0.01 * std::abs(ref)) return rec.iteration;
    }
    return std::numeric_limits<int>::max();
  };
  o.detail << " common final cost " << target << ";";
  int prev = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const int reach = first_within(runs[i], target);
    o.detail << " sigma2=" << sigmas[i] << ": "
             << (reach == std::numeric_limits<int>::max() ? std::string("never")
                                                          : std::to_string(reach))
             << " (own final " << runs[i].final_cost << " at "
             << first_within(runs[i], runs[i].final_cost) << ")";
    o.require(reach >= prev, "ordering at sigma2 " + std::to_string(sigmas[i]));
    prev = reach;
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 sigma-point counts", point_counts},
      {"AC2 quadrature exactness", quadrature_exactness},
      {"AC3 FH quadratic exactness", fh_quadratic_exactness},
      {"AC4 Gaussian smoothing identity", smoothing_identity},
      {"AC5 LQR oracle equivalence", lqr_equivalence},
      {"AC6 small-covariance DDP equivalence", small_covariance},
      {"AC7 third-order rule inadequacy", third_order_inadequate},
      {"AC8 monotone descent", monotone_descent},
      {"AC9 local quadratic convergence", quadratic_convergence},
      {"AC10 covariance-scale ordering", covariance_ordering},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::printf("%s %s:%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
