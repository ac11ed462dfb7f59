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

#include "spdp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spdp/riccati.hpp"

namespace spdp {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "': " + why);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* a) { return key == a; });
    if (!known) bad(where.empty() ? key : where + "." + key, "unknown key");
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) bad(key, "must be finite");
  return v;
}

long long get_integer(const json& j, const std::string& key) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) bad(key, "expected an integer");
  return j.get<long long>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) bad(key, "expected a string");
  return j.get<std::string>();
}

Vector get_vector(const json& j, const std::string& key) {
  if (!j.is_array()) bad(key, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = get_number(j[i], key + "[" + std::to_string(i) + "]");
  }
  return v;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string provider_name(DerivativeProvider p) {
  return p == DerivativeProvider::analytic ? "analytic" : "finite_difference";
}

std::string execution_name(Execution e) {
  return e == Execution::serial ? "serial" : "parallel";
}

Method parse_method(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "ddp") return Method::ddp;
  if (t == "spdp") return Method::spdp;
  throw std::invalid_argument("unknown method '" + text + "' (expected ddp or spdp)");
}

void parse_solver(const json& j, SolverConfig& s) {
  check_keys(j,
             {"beta0", "nu", "beta_min", "beta_max", "eps_min", "max_iter", "tol_rel_cost",
              "armijo", "derivatives", "execution"},
             "solver");
  if (j.contains("beta0")) s.beta0 = get_number(j["beta0"], "solver.beta0");
  if (j.contains("nu")) s.nu = get_number(j["nu"], "solver.nu");
  if (j.contains("beta_min")) s.beta_min = get_number(j["beta_min"], "solver.beta_min");
  if (j.contains("beta_max")) s.beta_max = get_number(j["beta_max"], "solver.beta_max");
  if (j.contains("eps_min")) s.eps_min = get_number(j["eps_min"], "solver.eps_min");
  if (j.contains("max_iter")) {
    auto v = get_integer(j["max_iter"], "solver.max_iter");
    if (v < 0 || v > std::numeric_limits<int>::max()) bad("solver.max_iter", "out of range");
    s.max_iter = static_cast<int>(v);
  }
  if (j.contains("tol_rel_cost")) s.tol_rel_cost = get_number(j["tol_rel_cost"], "solver.tol_rel_cost");
  if (j.contains("armijo")) s.armijo = get_number(j["armijo"], "solver.armijo");
  if (j.contains("derivatives")) {
    auto v = get_string(j["derivatives"], "solver.derivatives");
    if (v == "analytic") s.provider = DerivativeProvider::analytic;
    else if (v == "finite_difference") s.provider = DerivativeProvider::finite_difference;
    else bad("solver.derivatives", "expected analytic or finite_difference");
  }
  if (j.contains("execution")) {
    auto v = get_string(j["execution"], "solver.execution");
    if (v == "serial") s.execution = Execution::serial;
    else if (v == "parallel") s.execution = Execution::parallel;
    else bad("solver.execution", "expected serial or parallel");
  }
}

void parse_settings(const json& j, BenchmarkSettings& s, const std::string& where) {
  check_keys(j, {"dt", "horizon", "W_diag", "W_T_diag", "R_diag", "x1", "x_goal"}, where);
  if (j.contains("dt")) s.dt = get_number(j["dt"], where + ".dt");
  if (j.contains("horizon")) {
    auto v = get_integer(j["horizon"], where + ".horizon");
    if (v < 2 || v > 1000000) bad(where + ".horizon", "must be in [2, 1e6]");
    s.horizon = static_cast<int>(v);
  }
  if (j.contains("W_diag")) s.W_diag = get_vector(j["W_diag"], where + ".W_diag");
  if (j.contains("W_T_diag")) s.W_T_diag = get_vector(j["W_T_diag"], where + ".W_T_diag");
  if (j.contains("R_diag")) s.R_diag = get_vector(j["R_diag"], where + ".R_diag");
  if (j.contains("x1")) s.x1 = get_vector(j["x1"], where + ".x1");
  if (j.contains("x_goal")) s.x_goal = get_vector(j["x_goal"], where + ".x_goal");
}

json settings_json(const BenchmarkSettings& s) {
  return json{{"dt", s.dt},
              {"horizon", s.horizon},
              {"W_diag", vector_json(s.W_diag)},
              {"W_T_diag", vector_json(s.W_T_diag)},
              {"R_diag", vector_json(s.R_diag)},
              {"x1", vector_json(s.x1)},
              {"x_goal", vector_json(s.x_goal)}};
}

void check_settings(const BenchmarkSettings& s, int n, int m, const std::string& where) {
  if (!(s.dt > 0.0)) bad(where + ".dt", "must be positive");
  auto need = [&](const Vector& v, int size, const char* name) {
    if (v.size() != size) {
      bad(where + "." + name, "expected " + std::to_string(size) + " entries");
    }
  };
  need(s.W_diag, n, "W_diag");
  need(s.W_T_diag, n, "W_T_diag");
  need(s.R_diag, m, "R_diag");
  need(s.x1, n, "x1");
  need(s.x_goal, n, "x_goal");
}

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json optional_count(const std::optional<std::size_t>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string variant_dir_name(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  }
  return out;
}

}  // namespace

std::string to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::pendulum: return "pendulum";
    case ProblemKind::cartpole: return "cartpole";
    case ProblemKind::lqr_test: return "lqr-test";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(const std::string& text) {
  if (text == "pendulum") return ProblemKind::pendulum;
  if (text == "cartpole") return ProblemKind::cartpole;
  if (text == "lqr-test") return ProblemKind::lqr_test;
  throw std::invalid_argument("unknown problem '" + text +
                              "' (expected pendulum, cartpole or lqr-test)");
}

ExperimentConfig parse_experiment_config(const json& j, ExperimentConfig c) {
  check_keys(j,
             {"problem", "method", "rule", "sigma2_stage", "sigma2_terminal", "solver",
              "pendulum", "cartpole", "settings", "output_dir", "seed"},
             "");
  if (j.contains("problem")) c.problem = parse_problem_kind(get_string(j["problem"], "problem"));
  if (j.contains("method")) c.solver.method = parse_method(get_string(j["method"], "method"));
  if (j.contains("rule")) c.solver.rule = RuleSpec::parse(get_string(j["rule"], "rule"));
  if (j.contains("sigma2_stage")) c.solver.sigma2_stage = get_number(j["sigma2_stage"], "sigma2_stage");
  if (j.contains("sigma2_terminal")) {
    c.solver.sigma2_terminal = get_number(j["sigma2_terminal"], "sigma2_terminal");
  }
  if (j.contains("solver")) parse_solver(j["solver"], c.solver);
  if (j.contains("pendulum")) {
    const json& p = j["pendulum"];
    check_keys(p, {"a", "b", "l", "g"}, "pendulum");
    if (p.contains("a")) c.pendulum.a = get_number(p["a"], "pendulum.a");
    if (p.contains("b")) c.pendulum.b = get_number(p["b"], "pendulum.b");
    if (p.contains("l")) c.pendulum.l = get_number(p["l"], "pendulum.l");
    if (p.contains("g")) c.pendulum.g = get_number(p["g"], "pendulum.g");
  }
  if (j.contains("cartpole")) {
    const json& p = j["cartpole"];
    check_keys(p, {"m_c", "m_p", "l", "g"}, "cartpole");
    if (p.contains("m_c")) c.cartpole.m_c = get_number(p["m_c"], "cartpole.m_c");
    if (p.contains("m_p")) c.cartpole.m_p = get_number(p["m_p"], "cartpole.m_p");
    if (p.contains("l")) c.cartpole.l = get_number(p["l"], "cartpole.l");
    if (p.contains("g")) c.cartpole.g = get_number(p["g"], "cartpole.g");
  }
  if (j.contains("settings")) {
    const json& s = j["settings"];
    check_keys(s, {"pendulum", "cartpole", "lqr-test"}, "settings");
    if (s.contains("pendulum")) parse_settings(s["pendulum"], c.pendulum_settings, "settings.pendulum");
    if (s.contains("cartpole")) parse_settings(s["cartpole"], c.cartpole_settings, "settings.cartpole");
    if (s.contains("lqr-test")) parse_settings(s["lqr-test"], c.lqr_settings, "settings.lqr-test");
  }
  if (j.contains("output_dir")) c.output_dir = get_string(j["output_dir"], "output_dir");
  if (j.contains("seed")) {
    auto v = get_integer(j["seed"], "seed");
    if (v < 0) bad("seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(v);
  }

  c.solver.validate();
  c.pendulum.validate();
  c.cartpole.validate();
  check_settings(c.pendulum_settings, 2, 1, "settings.pendulum");
  check_settings(c.cartpole_settings, 4, 1, "settings.cartpole");
  check_settings(c.lqr_settings, 2, 1, "settings.lqr-test");
  return c;
}

json to_json(const ExperimentConfig& c) {
  const SolverConfig& s = c.solver;
  return json{
      {"problem", to_string(c.problem)},
      {"method", s.method == Method::ddp ? "ddp" : "spdp"},
      {"rule", [&] {
         std::string r = s.rule.label();
         std::transform(r.begin(), r.end(), r.begin(),
                        [](unsigned char ch) { return std::tolower(ch); });
         return r;
       }()},
      {"sigma2_stage", s.sigma2_stage},
      {"sigma2_terminal", s.sigma2_terminal},
      {"solver",
       {{"beta0", s.beta0},
        {"nu", s.nu},
        {"beta_min", s.beta_min},
        {"beta_max", s.beta_max},
        {"eps_min", s.eps_min},
        {"max_iter", s.max_iter},
        {"tol_rel_cost", s.tol_rel_cost},
        {"armijo", s.armijo},
        {"derivatives", provider_name(s.provider)},
        {"execution", execution_name(s.execution)}}},
      {"pendulum",
       {{"a", c.pendulum.a}, {"b", c.pendulum.b}, {"l", c.pendulum.l}, {"g", c.pendulum.g}}},
      {"cartpole",
       {{"m_c", c.cartpole.m_c}, {"m_p", c.cartpole.m_p}, {"l", c.cartpole.l}, {"g", c.cartpole.g}}},
      {"settings",
       {{"pendulum", settings_json(c.pendulum_settings)},
        {"cartpole", settings_json(c.cartpole_settings)},
        {"lqr-test", settings_json(c.lqr_settings)}}},
      {"output_dir", c.output_dir.string()},
      {"seed", c.seed}};
}

BenchmarkProblem build_problem(const ExperimentConfig& c) {
  switch (c.problem) {
    case ProblemKind::pendulum: return pendulum_benchmark(c.pendulum, c.pendulum_settings);
    case ProblemKind::cartpole: return cartpole_benchmark(c.cartpole, c.cartpole_settings);
    case ProblemKind::lqr_test: return lqr_benchmark(c.lqr_settings);
  }
  throw std::invalid_argument("unknown problem kind");
}

RunReport run_experiment(const ExperimentConfig& config, bool write_files) {
  RunReport report;
  report.config = config;
  report.label = to_string(config.solver.method);
  if (config.solver.method == Method::spdp) {
    report.label += "-" + config.solver.rule.label();
  }

  BenchmarkProblem bench = build_problem(config);
  std::vector<Vector> u0(static_cast<std::size_t>(bench.problem.num_controls()),
                         Vector::Zero(bench.problem.control_dim));
  report.result = solve(bench.problem, bench.initial_state, u0, config.solver);

  double back = 0.0, fwd = 0.0;
  for (const auto& rec : report.result.log) {
    back += rec.backward_seconds;
    fwd += rec.forward_seconds;
    if (!report.terminal_points && rec.terminal_evaluations > 0) {
      report.terminal_points = rec.terminal_evaluations;
      report.stage_points = rec.stage_evaluations_per_step;
    }
  }
  if (!report.result.log.empty()) {
    double n = static_cast<double>(report.result.log.size());
    report.avg_backward_seconds = back / n;
    report.avg_forward_seconds = fwd / n;
    report.avg_iteration_seconds = (back + fwd) / n;
  }

  if (config.problem == ProblemKind::lqr_test && bench.cost.x_goal.isZero(0.0)) {
    LinearSystem sys = lqr_test_system(config.lqr_settings.dt);
    report.riccati_cost = riccati_lqr(sys.A, sys.B, bench.cost.W, bench.cost.W_T, bench.cost.R,
                                      bench.problem.horizon, bench.initial_state)
                              .cost;
  }

  if (write_files) {
    std::filesystem::create_directories(config.output_dir);
    write_text(config.output_dir / "cost_curve.csv", cost_curve_csv(report));
    write_text(config.output_dir / "trajectory.csv", trajectory_csv(report));
    write_text(config.output_dir / "summary.json", summary_json(report).dump(2) + "\n");
  }
  return report;
}

std::string cost_curve_csv(const RunReport& report) {
  std::ostringstream os;
  os << "iteration,total_cost,beta,epsilon\n";
  os << 0 << ',' << fmt17(report.result.initial_cost) << ",,\n";
  for (const auto& rec : report.result.log) {
    os << rec.iteration << ',' << fmt17(rec.cost) << ',' << fmt17(rec.beta) << ','
       << fmt17(rec.epsilon) << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const RunReport& report) {
  const Trajectory& tr = report.result.trajectory;
  if (tr.states.empty()) return "k\n";
  const Eigen::Index n = tr.states.front().size();
  const Eigen::Index s = tr.controls.empty() ? 0 : tr.controls.front().size();
  std::ostringstream os;
  os << 'k';
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i + 1;
  for (Eigen::Index i = 0; i < s; ++i) os << ",u" << i + 1;
  os << '\n';
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    os << k + 1;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << fmt17(tr.states[k](i));
    for (Eigen::Index i = 0; i < s; ++i) {
      os << ',';
      if (k < tr.controls.size()) os << fmt17(tr.controls[k](i));
    }
    os << '\n';
  }
  return os.str();
}

json summary_json(const RunReport& r) {
  json j{{"label", r.label},
         {"problem", to_string(r.config.problem)},
         {"method", to_string(r.config.solver.method)},
         {"rule", r.config.solver.method == Method::spdp ? json(r.config.solver.rule.label())
                                                         : json(nullptr)},
         {"sigma2_stage", r.config.solver.sigma2_stage},
         {"sigma2_terminal", r.config.solver.sigma2_terminal},
         {"status", to_string(r.result.status)},
         {"message", r.result.message},
         {"iterations", r.iterations()},
         {"initial_cost", r.result.initial_cost},
         {"final_cost", r.result.final_cost},
         {"m_T", optional_count(r.terminal_points)},
         {"m_k", optional_count(r.stage_points)},
         {"avg_backward_seconds", r.avg_backward_seconds},
         {"avg_forward_seconds", r.avg_forward_seconds},
         {"avg_iteration_seconds", r.avg_iteration_seconds},
         {"seed", r.config.seed}};
  if (r.riccati_cost) {
    j["riccati_cost"] = *r.riccati_cost;
    j["riccati_relative_error"] =
        std::abs(r.result.final_cost - *r.riccati_cost) / std::max(1.0, std::abs(*r.riccati_cost));
  }
  return j;
}

SweepVariant SweepVariant::parse(const std::string& text) {
  SweepVariant v;
  v.label = text;
  std::string body = text;
  auto at = body.find('@');
  std::string sigma;
  if (at != std::string::npos) {
    sigma = body.substr(at + 1);
    body = body.substr(0, at);
  }
  auto dash = body.find('-');
  v.method = parse_method(body.substr(0, dash));
  if (v.method == Method::ddp) {
    if (dash != std::string::npos || !sigma.empty()) {
      throw std::invalid_argument("variant '" + text + "': ddp takes no rule or variance");
    }
    return v;
  }
  if (dash == std::string::npos) {
    throw std::invalid_argument("variant '" + text + "': expected spdp-<rule>[@sigma2]");
  }
  v.rule = RuleSpec::parse(body.substr(dash + 1));
  if (!sigma.empty()) {
    std::size_t used = 0;
    try {
      v.sigma2 = std::stod(sigma, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != sigma.size() || !(v.sigma2 > 0.0) || !std::isfinite(v.sigma2)) {
      throw std::invalid_argument("variant '" + text + "': bad variance '" + sigma + "'");
    }
  }
  return v;
}

SweepReport run_sweep(const ExperimentConfig& base, const std::vector<SweepVariant>& variants,
                      bool write_files) {
  SweepReport sweep;
  for (const auto& v : variants) {
    ExperimentConfig c = base;
    c.solver.method = v.method;
    c.solver.rule = v.rule;
    c.solver.sigma2_stage = v.sigma2;
    c.solver.sigma2_terminal = v.sigma2;
    c.output_dir = base.output_dir / "runs" / variant_dir_name(v.label);
    try {
      RunReport r = run_experiment(c, write_files);
      r.label = v.label;
      sweep.runs.push_back(std::move(r));
      sweep.errors.emplace_back();
    } catch (const std::exception& e) {
      RunReport r;
      r.label = v.label;
      r.config = c;
      sweep.runs.push_back(std::move(r));
      sweep.errors.emplace_back(e.what());
    }
  }

  if (write_files) {
    std::filesystem::create_directories(base.output_dir);
    write_text(base.output_dir / "comparison.csv", comparison_csv(sweep, variants));
    json table = json::array();
    for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
      const RunReport& r = sweep.runs[i];
      json row{{"label", r.label}};
      if (!sweep.errors[i].empty()) {
        row["status"] = "Error";
        row["error"] = sweep.errors[i];
      } else {
        row["status"] = to_string(r.result.status);
        row["iterations"] = r.iterations();
        row["final_cost"] = r.result.final_cost;
        row["m_T"] = optional_count(r.terminal_points);
        row["m_k"] = optional_count(r.stage_points);
        row["avg_backward_seconds"] = r.avg_backward_seconds;
        row["avg_forward_seconds"] = r.avg_forward_seconds;
        row["avg_iteration_seconds"] = r.avg_iteration_seconds;
      }
      table.push_back(row);
    }
    json summary{{"problem", to_string(base.problem)}, {"variants", table}};
    write_text(base.output_dir / "sweep_summary.json", summary.dump(2) + "\n");
  }
  return sweep;
}

std::string comparison_csv(const SweepReport& sweep, const std::vector<SweepVariant>& variants) {
  std::ostringstream os;
  os << "iteration";
  for (const auto& v : variants) os << ',' << v.label;
  os << '\n';
  if (variants.empty()) return os.str();

  std::size_t rows = 0;
  for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
    if (sweep.errors[i].empty()) rows = std::max(rows, sweep.runs[i].result.log.size() + 1);
  }
  for (std::size_t it = 0; it < rows; ++it) {
    os << it;
    for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
      os << ',';
      if (!sweep.errors[i].empty()) continue;
      const SolveResult& res = sweep.runs[i].result;
      if (it == 0) os << fmt17(res.initial_cost);
      else if (it <= res.log.size()) os << fmt17(res.log[it - 1].cost);
    }
    os << '\n';
  }
  return os.str();
}

int exit_code(SolveStatus status) {
  return status == SolveStatus::exhausted ? 2 : 0;
}

}  // namespace spdp
