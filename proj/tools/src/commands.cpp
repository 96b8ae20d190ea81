// Copyright 2026 The ohddp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ohddp_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "ohddp/derivatives.hpp"
#include "ohddp/io.hpp"
#include "ohddp/models/registry.hpp"
#include "ohddp/mpc.hpp"
#include "ohddp/oracle.hpp"
#include "ohddp/solver.hpp"
#include "ohddp/trajectory.hpp"

namespace ohddp::cli {
namespace {

namespace fs = std::filesystem;
using io::ConfigError;
using io::Json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string mode;  // empty: take from config
};

/// Fields shared by every command after resolution.
struct Experiment {
  Json model_json;
  ModelPtr model;
  Vector x0;
  int initial_horizon = 100;
  SolverConfig solver;
  std::uint64_t seed = 0;
};

Json load_model_json(const io::Fields& f, const fs::path& base_dir) {
  if (f.has("model") && f.has("model_file")) {
    throw ConfigError(f.child("model_file") + ": give either model or model_file, not both");
  }
  if (f.has("model")) return f.raw("model");
  if (f.has("model_file")) {
    std::string file;
    f.get("model_file", file);
    fs::path p(file);
    if (p.is_relative()) p = base_dir / p;
    if (!fs::exists(p)) throw ConfigError(f.child("model_file") + ": file not found: " + p.string());
    return io::read_json_file(p.string());
  }
  throw ConfigError(f.child("model") + ": required (or model_file)");
}

void apply_mode(SolverConfig& cfg, const std::string& mode) {
  if (mode.empty()) return;
  if (mode == "ilqr") {
    cfg.second_order = false;
  } else if (mode == "ddp") {
    cfg.second_order = true;
  } else {
    throw ConfigError("--mode: expected ilqr or ddp, got \"" + mode + "\"");
  }
}

/// Resolves model, x0, initial horizon, solver and seed from the config.
Experiment resolve(const CommonOptions& opt, io::Fields& f,
                   const char* x0_key = "x0") {
  Experiment e;
  const fs::path base = fs::path(opt.config_path).parent_path();
  e.model_json = load_model_json(f, base);
  e.model = make_model(e.model_json, f.has("model") ? "model" : "model_file");
  e.x0 = Vector::Zero(e.model->state_dim());
  f.get(x0_key, e.x0, e.model->state_dim());
  if (!e.model->admissible(e.x0)) throw ConfigError(f.child(x0_key) + ": state is not admissible");
  f.get("initial_horizon", e.initial_horizon);
  if (e.initial_horizon < 1) throw ConfigError(f.child("initial_horizon") + ": must be >= 1");
  if (f.has("solver")) e.solver = io::solver_config_from_json(f.raw("solver"), "solver");
  apply_mode(e.solver, opt.mode);
  f.get("seed", e.seed);
  if (opt.seed) e.seed = *opt.seed;
  return e;
}

Json resolved_json(const Experiment& e) {
  return {{"model", model_to_json(*e.model)},
          {"x0", io::to_json(e.x0)},
          {"initial_horizon", e.initial_horizon},
          {"solver", io::to_json(e.solver)},
          {"seed", e.seed}};
}

fs::path prepare_out(const CommonOptions& opt) {
  fs::path out(opt.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("--out: cannot create directory " + out.string() + ": " + ec.message());
  return out;
}

Json read_config(const CommonOptions& opt) {
  if (opt.config_path.empty()) throw ConfigError("--config: required");
  if (!fs::exists(opt.config_path)) throw ConfigError("--config: file not found: " + opt.config_path);
  return io::read_json_file(opt.config_path);
}

/// The model JSON with its "c_t" replaced.
Json with_ct(Json model_json, double c_t) {
  model_json["c_t"] = c_t;
  return model_json;
}

struct OracleSettings {
  int t_min = 1;
  int t_max = 100;
  int threads = 1;
  SolverConfig solver;
};

/// Defaults: range from the main solver bounds, DDP mode, tight tolerance.
OracleSettings oracle_settings(const io::Fields& f, const SolverConfig& base) {
  OracleSettings s;
  s.t_min = base.t_min;
  s.t_max = std::min(base.t_max, 300);
  s.solver = base;
  s.solver.second_order = true;
  s.solver.convergence_tol = 1e-12;
  s.solver.max_iterations = std::max(base.max_iterations, 1000);
  if (!f.has("oracle")) return s;
  io::Fields o(f.raw("oracle"), "oracle");
  o.get("t_min", s.t_min);
  o.get("t_max", s.t_max);
  o.get("threads", s.threads);
  if (o.has("solver")) s.solver = io::solver_config_from_json(o.raw("solver"), "oracle.solver", s.solver);
  o.finish();
  if (s.t_min < 1 || s.t_min > s.t_max) throw ConfigError("oracle.t_min: must be in [1, oracle.t_max]");
  if (s.threads < 1) throw ConfigError("oracle.threads: must be >= 1");
  return s;
}

Json to_json(const OracleSettings& s) {
  return {{"t_min", s.t_min}, {"t_max", s.t_max}, {"threads", s.threads},
          {"solver", io::to_json(s.solver)}};
}

int cmd_solve(const CommonOptions& opt) {
  Json raw = read_config(opt);
  io::Fields f(raw, "config");
  Experiment e = resolve(opt, f);
  // Experiment files may carry an oracle block for the oracle command.
  oracle_settings(f, e.solver);
  f.finish();
  const fs::path out = prepare_out(opt);

  const Trajectory init = default_initial_trajectory(*e.model, e.x0, e.initial_horizon);
  SolverConfig cfg = e.solver;
  if (e.initial_horizon > cfg.t_max || e.initial_horizon < cfg.t_min) {
    throw ConfigError("initial_horizon: outside [solver.t_min, solver.t_max]");
  }
  const auto t0 = Clock::now();
  SolverResult r = optimize_trajectory(*e.model, init, cfg);
  const double wall = seconds_since(t0);

  io::write_trajectory_csv((out / "trajectory.csv").string(), r.trajectory, e.model->timestep());
  io::write_trace_csv((out / "trace.csv").string(), r);
  Json summary = io::summary_json(r);
  summary["horizon_seconds"] = r.horizon * e.model->timestep();
  summary["wall_seconds"] = wall;
  summary["final_state"] = io::to_json(r.trajectory.final_state());
  summary["config"] = resolved_json(e);
  io::write_json_file((out / "summary.json").string(), summary);

  std::cout << "T*=" << r.horizon << " J=" << r.cost << " iterations=" << r.iterations
            << " status=" << to_string(r.status) << " wall=" << wall << "s\n";
  return r.converged() ? kSuccess : kNotConverged;
}

int cmd_oracle(const CommonOptions& opt) {
  Json raw = read_config(opt);
  io::Fields f(raw, "config");
  Experiment e = resolve(opt, f);
  const OracleSettings s = oracle_settings(f, e.solver);
  f.finish();
  const fs::path out = prepare_out(opt);

  const auto t0 = Clock::now();
  HorizonSweepResult sweep;
  try {
    sweep = exhaustive_horizon(*e.model, e.x0, s.t_min, s.t_max, s.solver, s.threads);
  } catch (const SolverFailure& err) {
    std::cerr << "oracle: " << err.what() << "\n";
    return kNotConverged;
  }
  const double wall = seconds_since(t0);
  io::write_horizon_table_csv((out / "horizon_table.csv").string(), sweep);
  Json config = resolved_json(e);
  config["oracle"] = to_json(s);
  Json summary = {{"best_horizon", sweep.best_horizon},
                  {"best_horizon_seconds", sweep.best_horizon * e.model->timestep()},
                  {"best_cost", sweep.best_cost},
                  {"wall_seconds", wall},
                  {"config", config}};
  io::write_json_file((out / "summary.json").string(), summary);
  std::cout << "T_exact=" << sweep.best_horizon << " J_exact=" << sweep.best_cost << "\n";
  return kSuccess;
}

int cmd_sweep_ct(const CommonOptions& opt) {
  Json raw = read_config(opt);
  io::Fields f(raw, "config");
  Experiment e = resolve(opt, f);
  const OracleSettings s = oracle_settings(f, e.solver);
  if (!f.has("c_t")) throw ConfigError("config.c_t: required (list of time penalties)");
  const Vector cts = io::vector_from_json(f.raw("c_t"), "config.c_t");
  if (cts.size() == 0) throw ConfigError("config.c_t: must not be empty");
  for (Eigen::Index i = 0; i < cts.size(); ++i) {
    if (!(cts[i] >= 0.0)) throw ConfigError("config.c_t[" + std::to_string(i) + "]: must be >= 0");
  }
  f.finish();
  const fs::path out = prepare_out(opt);
  const double dt = e.model->timestep();

  std::ofstream csv((out / "sweep_ct.csv").string());
  if (!csv) throw std::runtime_error((out / "sweep_ct.csv").string() + ": cannot open for writing");
  csv << std::setprecision(12);
  csv << "c_t,T_ours_steps,T_ours_seconds,T_exact,cost_ours,cost_exact,cost_error_pct,status\n";
  Json rows = Json::array();
  bool all_ok = true;
  for (Eigen::Index i = 0; i < cts.size(); ++i) {
    const double ct = cts[i];
    ModelPtr m = make_model(with_ct(e.model_json, ct), "model");
    std::string status;
    int T_ours = 0;
    double J_ours = NAN, solve_wall = NAN;
    try {
      const auto t0 = Clock::now();
      SolverResult r = optimize_trajectory(*m, default_initial_trajectory(*m, e.x0, e.initial_horizon), e.solver);
      solve_wall = seconds_since(t0);
      T_ours = r.horizon;
      J_ours = r.cost;
      status = to_string(r.status);
    } catch (const std::exception& err) {
      status = "failed";
      std::cerr << "sweep-ct: c_t=" << ct << ": solver failed: " << err.what() << "\n";
    }
    int T_exact = 0;
    double J_exact = NAN;
    try {
      HorizonSweepResult sweep = exhaustive_horizon(*m, e.x0, s.t_min, s.t_max, s.solver, s.threads);
      T_exact = sweep.best_horizon;
      J_exact = sweep.best_cost;
      io::write_horizon_table_csv((out / ("oracle_ct_" + std::to_string(i) + ".csv")).string(), sweep);
    } catch (const SolverFailure& err) {
      status += "+oracle_failed";
      std::cerr << "sweep-ct: c_t=" << ct << ": " << err.what() << "\n";
    }
    const double err_pct = 100.0 * (J_ours - J_exact) / std::abs(J_exact);
    if (status != "converged") all_ok = false;
    csv << ct << "," << T_ours << "," << T_ours * dt << "," << T_exact << "," << J_ours << ","
        << J_exact << "," << err_pct << "," << status << "\n";
    rows.push_back({{"c_t", ct}, {"T_ours_steps", T_ours}, {"T_ours_seconds", T_ours * dt},
                    {"T_exact", T_exact}, {"cost_ours", J_ours}, {"cost_exact", J_exact},
                    {"cost_error_pct", err_pct}, {"solve_seconds", solve_wall}, {"status", status}});
    std::cout << "c_t=" << ct << " T_ours=" << T_ours << " T_exact=" << T_exact
              << " err%=" << err_pct << " " << status << "\n";
  }
  Json config = resolved_json(e);
  config["oracle"] = to_json(s);
  config["c_t"] = io::to_json(cts);
  io::write_json_file((out / "summary.json").string(), {{"rows", rows}, {"config", config}});
  return all_ok ? kSuccess : kNotConverged;
}

MpcConfig mpc_config_from_json(const io::Fields& f, const Experiment& e) {
  MpcConfig c;
  c.solver = e.solver;
  c.seed = e.seed;
  c.initial_horizon = e.initial_horizon;
  if (f.has("mpc")) {
    io::Fields m(f.raw("mpc"), "mpc");
    m.get("inner_iterations", c.inner_iterations);
    m.get("initial_iterations", c.initial_iterations);
    m.get("receding_horizon", c.receding_horizon);
    m.get("noise_scale", c.noise_scale);
    m.get("noise_state_scale", c.noise_state_scale, e.model->state_dim());
    m.get("step_limit", c.step_limit);
    m.finish();
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("mpc: ") + err.what());
  }
  return c;
}

Json to_json(const MpcConfig& c) {
  return {{"inner_iterations", c.inner_iterations},
          {"initial_iterations", c.initial_iterations},
          {"initial_horizon", c.initial_horizon},
          {"receding_horizon", c.receding_horizon},
          {"noise_scale", c.noise_scale},
          {"noise_state_scale", io::to_json(c.noise_state_scale)},
          {"step_limit", c.step_limit},
          {"seed", c.seed}};
}

PlantSchedule plant_for(const ModelPtr& model) {
  if (auto nav = std::dynamic_pointer_cast<const PointMassNavModel>(model)) {
    PlantSchedule p;
    p.truth = [nav](double t) -> ModelPtr { return std::make_shared<PointMassNavModel>(nav->advanced(t)); };
    p.planner_view = [nav](double t) -> ModelPtr {
      return std::make_shared<PointMassNavModel>(nav->advanced(t).snapshot());
    };
    return p;
  }
  return PlantSchedule::fixed(model);
}

Json episode_summary(const EpisodeLog& log, const SystemModel& model, double arena_scale) {
  double solve_sum = 0.0;
  int it_sum = 0, it_max = 0;
  for (const auto& s : log.steps) {
    solve_sum += s.solve_seconds;
    it_sum += s.iterations;
    it_max = std::max(it_max, s.iterations);
  }
  const double n = std::max<double>(1.0, static_cast<double>(log.steps.size()));
  Json j = {{"mode", to_string(log.mode)},
            {"terminated", log.terminated},
            {"termination_step", log.terminated ? Json(log.steps_used) : Json(nullptr)},
            {"steps_used", log.steps_used},
            {"total_cost", log.total_cost},
            {"mean_solve_seconds", solve_sum / n},
            {"mean_iterations", it_sum / n},
            {"max_iterations", it_max},
            {"final_state", io::to_json(log.final_state)}};
  if (auto* nav = dynamic_cast<const PointMassNavModel*>(&model)) {
    const double d = nav->goal_distance(log.final_state);
    j["final_goal_distance"] = d;
    j["final_goal_distance_fraction"] = d / arena_scale;
  }
  return j;
}

int cmd_mpc(const CommonOptions& opt) {
  Json raw = read_config(opt);
  io::Fields f(raw, "config");
  Experiment e = resolve(opt, f, "x_init");
  const MpcConfig mc = mpc_config_from_json(f, e);
  double arena_scale = 10.0;
  f.get("arena_scale", arena_scale);
  if (!(arena_scale > 0.0)) throw ConfigError("config.arena_scale: must be > 0");
  f.finish();
  const fs::path out = prepare_out(opt);

  const PlantSchedule plant = plant_for(e.model);
  Json comparison = Json::object();
  for (MpcMode mode : {MpcMode::kOptimalHorizon, MpcMode::kRecedingHorizon}) {
    const EpisodeLog log = run_episode(plant, e.x0, mc, mode);
    const std::string tag = to_string(mode);
    io::write_episode_csv((out / ("episode_" + tag + ".csv")).string(), log);
    io::write_json_file((out / ("episode_" + tag + ".json")).string(), io::to_json(log));
    comparison[tag] = episode_summary(log, *e.model, arena_scale);
    std::cout << tag << ": terminated=" << log.terminated << " steps=" << log.steps_used
              << " mean_solve=" << comparison[tag]["mean_solve_seconds"].get<double>() << "s\n";
  }
  Json config = resolved_json(e);
  config.erase("x0");
  config["x_init"] = io::to_json(e.x0);
  config["mpc"] = to_json(mc);
  config["arena_scale"] = arena_scale;
  comparison["config"] = config;
  io::write_json_file((out / "comparison.json").string(), comparison);
  return kSuccess;
}

int cmd_check(const CommonOptions& opt, const std::string& model_name, int samples) {
  Json model_json;
  std::uint64_t seed = opt.seed.value_or(0);
  if (!model_name.empty()) {
    model_json = {{"type", model_name}};
  } else {
    Json raw = read_config(opt);
    io::Fields f(raw, "config");
    model_json = load_model_json(f, fs::path(opt.config_path).parent_path());
    f.get("samples", samples);
    if (!opt.seed) f.get("seed", seed);
    f.finish();
  }
  if (samples < 1) throw ConfigError("samples: must be >= 1");
  ModelPtr model = make_model(model_json, "model");
  const auto pts = derivative_samples(*model, samples, seed);
  const DerivativeReport rep = check_derivatives(*model, pts);

  Json entries = Json::array();
  for (const auto& d : rep.entries) {
    entries.push_back({{"quantity", d.quantity}, {"max_relative", d.max_relative}, {"analytic", d.analytic}});
    std::cout << d.quantity << (d.analytic ? " " : " (numeric only) ") << d.max_relative << "\n";
  }
  std::cout << model->name() << ": " << (rep.passed ? "PASS" : "FAIL") << "\n";
  if (!opt.out_dir.empty() && opt.out_dir != ".") {
    const fs::path out = prepare_out(opt);
    io::write_json_file((out / "derivative_report.json").string(),
                        {{"passed", rep.passed},
                         {"tolerance", rep.tolerance},
                         {"entries", entries},
                         {"config", {{"model", model_to_json(*model)}, {"samples", samples}, {"seed", seed}}}});
  }
  return rep.passed ? kSuccess : kNotConverged;
}

void add_common(CLI::App* sub, CommonOptions& opt, bool config_required) {
  auto* c = sub->add_option("--config", opt.config_path, "Experiment config (JSON)");
  if (config_required) c->required();
  sub->add_option("--out", opt.out_dir, "Output directory");
  sub->add_option("--seed", opt.seed, "Random seed (overrides the config)");
  sub->add_option("--mode", opt.mode, "Backward pass: ilqr or ddp (overrides the config)")
      ->check(CLI::IsMember({"ilqr", "ddp"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Optimal-horizon differential dynamic programming"};
  app.require_subcommand(1);
  CommonOptions opt;
  std::string model_name;
  int samples = 20;

  auto* solve = app.add_subcommand("solve", "Optimize controls and horizon for one problem");
  add_common(solve, opt, true);
  auto* sweep = app.add_subcommand("sweep-ct", "Sweep the time penalty against the exhaustive oracle");
  add_common(sweep, opt, true);
  auto* mpc = app.add_subcommand("mpc", "Optimal-horizon vs receding-horizon MPC episodes");
  add_common(mpc, opt, true);
  auto* oracle = app.add_subcommand("oracle", "Exhaustive fixed-horizon sweep");
  add_common(oracle, opt, true);
  auto* check = app.add_subcommand("check", "Compare analytic and finite-difference derivatives");
  add_common(check, opt, false);
  check->add_option("--model", model_name, "Model name (instead of --config)");
  check->add_option("--samples", samples, "Number of sample points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*solve) return cmd_solve(opt);
    if (*sweep) return cmd_sweep_ct(opt);
    if (*mpc) return cmd_mpc(opt);
    if (*oracle) return cmd_oracle(opt);
    if (*check) {
      if (model_name.empty() && opt.config_path.empty()) {
        throw ConfigError("check: give --model NAME or --config PATH");
      }
      return cmd_check(opt, model_name, samples);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kNotConverged;
  }
  return kUsageError;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"ohddp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ohddp::cli
