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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spdp/errors.hpp"
#include "spdp/kernels.hpp"
#include "spdp/models.hpp"
#include "support/oracles.hpp"

namespace spdp {
namespace {

Trajectory random_nominal(const BenchmarkProblem& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> u;
  for (int k = 0; k < b.problem.num_controls(); ++k) u.push_back(oracle::random_vector(1, 2.0, rng));
  return rollout(b.problem, b.initial_state, u);
}

std::vector<GaussianWindow> windows_along(const Trajectory& t, double s2) {
  std::vector<GaussianWindow> w;
  for (std::size_t k = 0; k < t.controls.size(); ++k) {
    Vector mu(t.states[k].size() + t.controls[k].size());
    mu << t.states[k], t.controls[k];
    w.push_back(GaussianWindow::from_covariance(mu, s2 * Matrix::Identity(mu.size(), mu.size())));
  }
  return w;
}

TEST(Kernels, SigmaImagesIdenticalAcrossImplementations) {
  BenchmarkProblem b = cartpole_benchmark();
  Trajectory t = random_nominal(b, 1);
  auto w = windows_along(t, 1e-2);
  SigmaRule rule = gauss_hermite_rule(5, 3);
  EvalCounters cs, cp;
  auto s = ref::evaluate_stage_sigma_images(b.problem, w, rule, cs);
  auto p = omp::evaluate_stage_sigma_images(b.problem, w, rule, cp);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_EQ(s[k].next_states, p[k].next_states);
    EXPECT_EQ(s[k].stage_costs, p[k].stage_costs);
  }
  EXPECT_EQ(cs.stage.load(), 243u * 49u);
  EXPECT_EQ(cp.stage.load(), cs.stage.load());
}

TEST(Kernels, TerminalValuesIdenticalAcrossImplementations) {
  BenchmarkProblem b = cartpole_benchmark();
  GaussianWindow w = GaussianWindow::from_covariance(Vector::Constant(4, 0.3), 0.1 * Matrix::Identity(4, 4));
  SigmaRule rule = cubature_rule(4, 7);
  EvalCounters cs, cp;
  Vector s = ref::evaluate_terminal_sigma_values(b.problem, w, rule, cs);
  Vector p = omp::evaluate_terminal_sigma_values(b.problem, w, rule, cp);
  EXPECT_EQ(s, p);
  EXPECT_EQ(cs.terminal.load(), 97u);
  EXPECT_EQ(cp.terminal.load(), 97u);
}

TEST(Kernels, StageDerivativesIdenticalAcrossImplementations) {
  BenchmarkProblem b = pendulum_benchmark();
  Trajectory t = random_nominal(b, 2);
  for (DerivativeProvider prov : {DerivativeProvider::analytic, DerivativeProvider::finite_difference}) {
    StageBatch s = ref::evaluate_stage_derivatives(b.problem, t, prov);
    StageBatch p = omp::evaluate_stage_derivatives(b.problem, t, prov);
    ASSERT_EQ(s.derivatives.size(), p.derivatives.size());
    for (std::size_t k = 0; k < s.derivatives.size(); ++k) {
      EXPECT_EQ(s.derivatives[k].dynamics.F_x, p.derivatives[k].dynamics.F_x);
      EXPECT_EQ(s.derivatives[k].dynamics.F_xx[1], p.derivatives[k].dynamics.F_xx[1]);
      EXPECT_EQ(s.derivatives[k].cost.L_x, p.derivatives[k].cost.L_x);
      EXPECT_EQ(s.stage_costs[k], p.stage_costs[k]);
      EXPECT_EQ(s.next_states[k], p.next_states[k]);
    }
  }
}

TEST(Kernels, DispatchFollowsExecutionMode) {
  BenchmarkProblem b = pendulum_benchmark();
  Trajectory t = random_nominal(b, 3);
  auto w = windows_along(t, 1e-3);
  SigmaRule rule = cubature_rule(3, 5);
  EvalCounters c1, c2;
  auto s = evaluate_stage_sigma_images(b.problem, w, rule, Execution::serial, c1);
  auto p = evaluate_stage_sigma_images(b.problem, w, rule, Execution::parallel, c2);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s[k].next_states, p[k].next_states);
}

TEST(Kernels, LowestFailingIndexIsReported) {
  BenchmarkProblem b = pendulum_benchmark();
  Trajectory t = random_nominal(b, 4);
  ControlProblem broken = b.problem;
  broken.stage_cost = [](int k, const Vector&, const Vector&) { return k >= 17 ? NAN : 0.0; };
  auto w = windows_along(t, 1e-3);
  SigmaRule rule = gauss_hermite_rule(3, 3);
  for (bool parallel : {false, true}) {
    EvalCounters c;
    try {
      if (parallel) omp::evaluate_stage_sigma_images(broken, w, rule, c);
      else ref::evaluate_stage_sigma_images(broken, w, rule, c);
      FAIL();
    } catch (const NonFiniteError& e) {
      EXPECT_EQ(e.step(), 17) << parallel;
      EXPECT_EQ(e.point().size(), 3);
    }
  }
}

TEST(Kernels, ThreadCountIsPositive) { EXPECT_GE(omp::max_threads(), 1); }

}  // namespace
}  // namespace spdp
