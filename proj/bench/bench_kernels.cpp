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

// Serial reference kernels against their OpenMP counterparts on the
// cart-pole benchmark (n = 4, s = 1, T = 50).

#include <benchmark/benchmark.h>

#include "spdp/fhdp.hpp"
#include "spdp/kernels.hpp"
#include "spdp/models.hpp"

namespace {

using namespace spdp;

struct Fixture {
  BenchmarkProblem bench = cartpole_benchmark();
  Trajectory nominal;
  std::vector<GaussianWindow> windows;

  Fixture() {
    std::vector<Vector> u;
    for (int k = 0; k < bench.problem.num_controls(); ++k) u.push_back(Vector::Constant(1, 0.1 * (k % 7)));
    nominal = rollout(bench.problem, bench.initial_state, u);
    for (std::size_t k = 0; k < nominal.controls.size(); ++k) {
      Vector mu(5);
      mu << nominal.states[k], nominal.controls[k];
      windows.push_back(GaussianWindow::from_covariance(mu, 1e-3 * Matrix::Identity(5, 5)));
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_SigmaImages(benchmark::State& state, Execution exec) {
  const Fixture& f = fixture();
  const SigmaRule rule = gauss_hermite_rule(5, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    EvalCounters c;
    benchmark::DoNotOptimize(evaluate_stage_sigma_images(f.bench.problem, f.windows, rule, exec, c));
  }
  state.counters["points"] = static_cast<double>(rule.size());
  state.counters["threads"] = omp::max_threads();
}

void BM_StageDerivatives(benchmark::State& state, Execution exec) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_stage_derivatives(f.bench.problem, f.nominal,
                                                        DerivativeProvider::finite_difference, exec));
  }
}

void BM_FhdpBackward(benchmark::State& state, Execution exec) {
  const Fixture& f = fixture();
  const RulePair rules{cubature_rule(4, 7), cubature_rule(5, 7)};
  const CovarianceSchedule schedule = CovarianceSchedule::scaled(4, 1, 1e-3, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fhdp_backward(f.bench.problem, f.nominal, schedule, rules, 100.0, exec));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_SigmaImages, serial, Execution::serial)->Arg(3)->Arg(5);
BENCHMARK_CAPTURE(BM_SigmaImages, openmp, Execution::parallel)->Arg(3)->Arg(5);
BENCHMARK_CAPTURE(BM_StageDerivatives, serial, Execution::serial);
BENCHMARK_CAPTURE(BM_StageDerivatives, openmp, Execution::parallel);
BENCHMARK_CAPTURE(BM_FhdpBackward, serial, Execution::serial);
BENCHMARK_CAPTURE(BM_FhdpBackward, openmp, Execution::parallel);
BENCHMARK_MAIN();
