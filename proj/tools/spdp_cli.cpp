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

// Command-line runner for single experiments and method sweeps.
//
//   spdp run   --config cfg.json --problem pendulum --method spdp --rule gh3 --out out/
//   spdp sweep --config cfg.json --variant ddp --variant spdp-gh3@1e-6 --out out/

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdp/experiment.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> problem;
  std::optional<std::string> method;
  std::optional<std::string> rule;
  std::optional<double> sigma_scale;
  std::optional<int> max_iter;
  std::optional<std::string> out;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--problem", o.problem, "pendulum | cartpole | lqr-test");
  app->add_option("--method", o.method, "ddp | spdp");
  app->add_option("--rule", o.rule, "gh<p> | ut3 | ut5 | ut7");
  app->add_option("--sigma-scale", o.sigma_scale,
                  "window variance sigma^2, applied to stage and terminal");
  app->add_option("--max-iter", o.max_iter, "iteration limit");
  app->add_option("--out", o.out, "output directory");
}

spdp::ExperimentConfig load(const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open " + o.config_path);
    j = nlohmann::json::parse(in);
  }
  if (o.problem) j["problem"] = *o.problem;
  if (o.method) j["method"] = *o.method;
  if (o.rule) j["rule"] = *o.rule;
  if (o.sigma_scale) {
    j["sigma2_stage"] = *o.sigma_scale;
    j["sigma2_terminal"] = *o.sigma_scale;
  }
  if (o.max_iter) j["solver"]["max_iter"] = *o.max_iter;
  if (o.out) j["output_dir"] = *o.out;
  return spdp::parse_experiment_config(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory optimization with DDP and sigma-point dynamic programming"};
  app.require_subcommand(1);

  Overrides run_opts;
  CLI::App* run = app.add_subcommand("run", "solve one configured problem");
  add_common(run, run_opts);

  Overrides sweep_opts;
  std::vector<std::string> variants;
  CLI::App* sweep = app.add_subcommand("sweep", "solve one problem with several methods");
  add_common(sweep, sweep_opts);
  sweep->add_option("--variant", variants,
                    "ddp or spdp-<rule>[@sigma2]; repeat for each column");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      spdp::ExperimentConfig config = load(run_opts);
      spdp::RunReport report = spdp::run_experiment(config);
      std::cout << report.label << ": " << spdp::to_string(report.result.status) << " after "
                << report.iterations() << " iterations, cost " << report.result.initial_cost
                << " -> " << report.result.final_cost << "\n";
      if (report.terminal_points) {
        std::cout << "m_T = " << *report.terminal_points << ", m_k = " << *report.stage_points
                  << "\n";
      }
      std::cout << "wrote " << config.output_dir.string() << "\n";
      return spdp::exit_code(report.result.status);
    }

    spdp::ExperimentConfig config = load(sweep_opts);
    std::vector<spdp::SweepVariant> parsed;
    for (const auto& v : variants) parsed.push_back(spdp::SweepVariant::parse(v));
    spdp::SweepReport report = spdp::run_sweep(config, parsed);
    int code = 0;
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
      const auto& r = report.runs[i];
      if (!report.errors[i].empty()) {
        std::cout << r.label << ": error: " << report.errors[i] << "\n";
        continue;
      }
      std::cout << r.label << ": " << spdp::to_string(r.result.status) << " after "
                << r.iterations() << " iterations, final cost " << r.result.final_cost << "\n";
    }
    std::cout << "wrote " << config.output_dir.string() << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
