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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdp/models.hpp"
#include "spdp/solver.hpp"

namespace spdp {

enum class ProblemKind { pendulum, cartpole, lqr_test };

std::string to_string(ProblemKind p);
ProblemKind parse_problem_kind(const std::string& text);

/// Everything needed to reproduce one run. Defaults mirror
/// config/defaults.json.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::pendulum;
  SolverConfig solver;
  PendulumParams pendulum;
  CartPoleParams cartpole;
  BenchmarkSettings pendulum_settings = default_pendulum_settings();
  BenchmarkSettings cartpole_settings = default_cartpole_settings();
  BenchmarkSettings lqr_settings = default_lqr_settings();
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;  // reserved; the solvers are deterministic
};

/// Overlays the keys present in `j` on `base`. Unknown keys, wrong types and
/// out-of-range values throw std::invalid_argument naming the key.
ExperimentConfig parse_experiment_config(const nlohmann::json& j, ExperimentConfig base = {});
nlohmann::json to_json(const ExperimentConfig& config);

/// Benchmark problem selected by the config.
BenchmarkProblem build_problem(const ExperimentConfig& config);

struct RunReport {
  std::string label;
  ExperimentConfig config;
  SolveResult result;
  std::optional<std::size_t> terminal_points;  // m_T, from the evaluation counters
  std::optional<std::size_t> stage_points;     // m_k, from the evaluation counters
  double avg_backward_seconds = 0.0;
  double avg_forward_seconds = 0.0;
  double avg_iteration_seconds = 0.0;
  std::optional<double> riccati_cost;  // lqr-test only

  int iterations() const { return static_cast<int>(result.log.size()); }
};

/// Solves from zero initial controls. When write_files is set, writes
/// cost_curve.csv, trajectory.csv and summary.json into config.output_dir.
RunReport run_experiment(const ExperimentConfig& config, bool write_files = true);

std::string cost_curve_csv(const RunReport& report);
std::string trajectory_csv(const RunReport& report);
nlohmann::json summary_json(const RunReport& report);

/// One column of a sweep: "ddp", "spdp-gh3@1e-6", "spdp-ut5@0.1", ...
/// The variance applies to both the stage and the terminal window.
struct SweepVariant {
  std::string label;
  Method method = Method::ddp;
  RuleSpec rule;
  double sigma2 = 1e-6;

  static SweepVariant parse(const std::string& text);
};

struct SweepReport {
  std::vector<RunReport> runs;
  std::vector<std::string> errors;  // one per variant, empty when it ran
};

/// Runs every variant on the base config and writes comparison.csv (one cost
/// column per variant, aligned by iteration) and sweep_summary.json (the
/// timing and point-count table). A failing variant is recorded, not fatal.
SweepReport run_sweep(const ExperimentConfig& base, const std::vector<SweepVariant>& variants,
                      bool write_files = true);

std::string comparison_csv(const SweepReport& sweep, const std::vector<SweepVariant>& variants);

/// Process exit code for a finished run: 0 for Converged or MaxIter.
int exit_code(SolveStatus status);

}  // namespace spdp
