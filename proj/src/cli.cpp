// Copyright 2026 The nmqj Authors
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

#include "nmqj/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "nmqj/model.hpp"
#include "nmqj/oracle.hpp"
#include "nmqj/output.hpp"
#include "nmqj/parallel.hpp"
#include "nmqj/runner.hpp"

namespace nmqj {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunArgs {
  std::string method;
  std::string model_path;
  std::int64_t n = 10000;
  double dt = 1e-3;
  double t_final = 1.0;
  std::uint64_t seed = 0;
  std::int64_t stride = 1;
  std::string out_dir;
  int threads = 1;
  double ray_tol = kDefaultRayTolerance;
  double p_max = kDefaultMaxJumpProbability;
  std::size_t max_rays = 4096;
  std::vector<std::string> observables;
};

struct CompareArgs {
  std::string dir_a;
  std::string dir_b;
  double tol = 1e-6;
  double k = 4.0;
  std::string report = "report.json";
};

struct PresetArgs {
  std::string name;
  std::string output;
  std::map<std::string, double> values;
};

json state_json(const StateVector& psi) {
  json a = json::array();
  for (Index i = 0; i < psi.dim(); ++i) a.push_back({psi[i].real(), psi[i].imag()});
  return a;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> observable_values(const std::vector<NamedObservable>& obs, const CMatrix& rho) {
  std::vector<double> out;
  out.reserve(obs.size());
  for (const auto& o : obs) out.push_back((o.op.entries() * rho).trace().real());
  return out;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error(p.string() + ": cannot write");
  os << text;
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  ModelSpec model;
  std::vector<NamedObservable> obs;
  try {
    model = load_model_file(args.model_path);
    for (const auto& name : args.observables) obs.push_back(resolve_observable(model, name));
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  std::vector<std::string> obs_names;
  for (const auto& o : obs) obs_names.push_back(o.name);

  const fs::path dir = args.out_dir.empty() ? fs::path("run_" + args.method) : fs::path(args.out_dir);
  fs::create_directories(dir);

  if (args.threads > 0) set_num_threads(args.threads);
  const Execution exec = args.threads > 1 ? Execution::parallel : Execution::serial;

  const std::string digest = model_digest(model);
  json config = {{"dt", args.dt},       {"t_final", args.t_final}, {"record_stride", args.stride},
                 {"threads", args.threads}, {"ray_tolerance", args.ray_tol}};
  if (args.method == "nmqj") {
    config["ensemble_size"] = args.n;
    config["seed"] = args.seed;
    config["max_jump_probability"] = args.p_max;
  }
  if (args.method == "pint") config["max_rays"] = args.max_rays;

  json meta;
  meta["method"] = args.method;
  meta["version"] = kVersion;
  meta["model_file"] = args.model_path;
  meta["model_digest"] = digest;
  meta["config"] = config;
  meta["seed"] = args.seed;
  meta["observables"] = obs_names;
  {
    json id_cfg = config;
    id_cfg.erase("threads");
    meta["run_id"] = fmt::format("{}-{}-{:016x}", args.method, digest.substr(0, 8), fnv1a(id_cfg.dump()));
  }

  std::ostringstream csv;
  csv << timeseries_header(model.dim, obs_names) << '\n';
  std::ostringstream rays;
  int code = exit_code::ok;
  std::string status = "completed";

  const auto start = std::chrono::steady_clock::now();
  try {
    if (args.method == "rk4") {
      const auto traj = integrate_rk4(model, DensityMatrix::pure(model.initial_state), args.dt, args.t_final,
                                      args.stride);
      for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const CMatrix& rho = traj.states[i].entries();
        write_timeseries_row(csv, {traj.steps[i], traj.times[i], rho, min_eigenvalue(traj.states[i], 1e-9), 0,
                                   observable_values(obs, rho)});
      }
    } else if (args.method == "pint") {
      PIntegratorOptions opts;
      opts.ray_tolerance = args.ray_tol;
      opts.max_rays = args.max_rays;
      opts.execution = exec;
      const auto snaps = run_p_integrator(model, args.dt, args.t_final, args.stride, opts);
      for (const auto& s : snaps) {
        const CMatrix& rho = s.density.entries();
        write_timeseries_row(csv, {s.step, s.t, rho, s.min_eigenvalue,
                                   static_cast<std::int64_t>(s.ensemble.rays.size()), observable_values(obs, rho)});
        json line = {{"step", s.step}, {"t", s.t}, {"weights", s.ensemble.weights}};
        json reps = json::array();
        for (const auto& r : s.ensemble.rays) reps.push_back(state_json(r));
        line["rays"] = std::move(reps);
        rays << line.dump() << '\n';
      }
    } else {
      RunConfig cfg;
      cfg.dt = args.dt;
      cfg.t_final = args.t_final;
      cfg.ensemble_size = args.n;
      cfg.seed = args.seed;
      cfg.record_stride = args.stride;
      cfg.ray_tolerance = args.ray_tol;
      cfg.max_jump_probability = args.p_max;
      cfg.execution = exec;
      const RunResult res = run(model, cfg);
      for (const auto& s : res.snapshots) {
        std::int64_t occupied = 0;
        for (auto c : s.counts) occupied += c > 0 ? 1 : 0;
        const CMatrix& rho = s.density.entries();
        write_timeseries_row(csv, {s.step, s.t, rho, s.min_eigenvalue, occupied, observable_values(obs, rho)});
        json line = {{"step", s.step}, {"t", s.t}, {"counts", s.counts}};
        json reps = json::array();
        for (const auto& r : s.rays) reps.push_back(state_json(r));
        line["rays"] = std::move(reps);
        rays << line.dump() << '\n';
      }

      std::ostringstream jumps;
      jumps << "step,t,channel,rate,forward_proposals,reverse_proposals,forward_jumps,reverse_jumps\n";
      json summary = json::object();
      for (const auto& e : res.jump_log) {
        jumps << e.step << ',' << format_double(e.t) << ',' << model.channels[e.channel].label << ','
              << format_double(e.rate) << ',' << e.forward_proposals << ',' << e.reverse_proposals << ','
              << e.forward_jumps << ',' << e.reverse_jumps << '\n';
        auto& s = summary[model.channels[e.channel].label];
        if (s.is_null()) s = {{"forward_jumps", 0}, {"reverse_jumps", 0}, {"reverse_proposals", 0}};
        s["forward_jumps"] = s["forward_jumps"].get<std::int64_t>() + e.forward_jumps;
        s["reverse_jumps"] = s["reverse_jumps"].get<std::int64_t>() + e.reverse_jumps;
        s["reverse_proposals"] = s["reverse_proposals"].get<std::int64_t>() + e.reverse_proposals;
      }
      write_file(dir / "jumps.csv", jumps.str());
      meta["jump_summary"] = summary;
      meta["steps_completed"] = res.steps_completed;
      meta["max_rays"] = res.max_rays;

      if (res.breakdown) {
        const auto& b = *res.breakdown;
        json rec = {{"step", b.step},
                    {"t", b.t},
                    {"channel", b.channel},
                    {"channel_label", b.channel_label},
                    {"target_ray", b.target_ray},
                    {"target_count", b.target_count},
                    {"target_state", state_json(b.target_state)},
                    {"reverse_flux", b.reverse_flux},
                    {"message", b.message}};
        rec["source_ray"] = b.source_ray == kNoRay ? json(nullptr) : json(b.source_ray);
        if (b.source_state) rec["source_state"] = state_json(*b.source_state);
        meta["breakdown"] = rec;
        status = "positivity_breakdown";
        code = exit_code::positivity_breakdown;
        err << "error: " << b.message << " (step " << b.step << ")\n";
      } else if (res.timestep) {
        const auto& ts = *res.timestep;
        meta["timestep"] = {{"step", ts.step},
                            {"t", ts.t},
                            {"ray", ts.ray},
                            {"total_probability", ts.total_probability},
                            {"limit", ts.limit},
                            {"suggested_dt", ts.suggested_dt},
                            {"message", ts.message}};
        status = "timestep_too_large";
        code = exit_code::timestep_too_large;
        err << "error: " << ts.message << " (step " << ts.step << ")\n";
      }
    }
  } catch (const RayLimitExceeded& e) {
    err << "error: " << e.what() << '\n';
    status = "ray_limit_exceeded";
    code = exit_code::usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_file(dir / "timeseries.csv", csv.str());
  json outputs = {{"timeseries", "timeseries.csv"}};
  if (args.method != "rk4") {
    write_file(dir / "rays.jsonl", rays.str());
    outputs["rays"] = "rays.jsonl";
  }
  if (args.method == "nmqj") outputs["jumps"] = "jumps.csv";
  meta["outputs"] = outputs;
  meta["status"] = status;
  meta["exit_code"] = code;
  meta["wall_time_s"] = wall;
  write_file(dir / "meta.json", meta.dump(2) + "\n");

  out << meta["run_id"].get<std::string>() << ": " << status << " (" << fmt::format("{:.3f}", wall) << " s) -> "
      << dir.string() << '\n';
  return code;
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  RunData a, b;
  try {
    a = load_run(args.dir_a);
    b = load_run(args.dir_b);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  CompareReport rep;
  try {
    rep = compare_runs(a, b, {args.tol, args.k});
  } catch (const GridMismatch& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  write_file(args.report, report_json(rep, a, b) + "\n");
  out << (rep.pass ? "PASS" : "FAIL") << " (" << rep.mode << "): worst |diff| " << format_double(rep.worst_diff)
      << " vs allowed " << format_double(rep.worst_allowed) << " at t=" << format_double(rep.worst_t)
      << ", rho[" << rep.worst_row << "][" << rep.worst_col << "]." << rep.worst_part << '\n';
  return rep.pass ? exit_code::ok : exit_code::compare_failed;
}

int cmd_presets_list(std::ostream& out) {
  for (const auto& p : preset_catalog()) {
    out << p.name << "  " << p.description << '\n';
    for (const auto& [k, v] : p.defaults) out << "    " << k << " = " << format_double(v) << '\n';
  }
  return exit_code::ok;
}

int cmd_presets_render(const PresetArgs& args, std::ostream& out, std::ostream& err) {
  ModelSpec m;
  try {
    m = make_preset(args.name, args.values);
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  const std::string text = render_model(m) + "\n";
  if (args.output.empty()) {
    out << text;
  } else {
    write_file(args.output, text);
  }
  return exit_code::ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Markovian quantum jump simulator", "nmqj"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a simulation and write timeseries.csv + meta.json");
  run_cmd->add_option("method", run_args.method, "nmqj, rk4 or pint")
      ->required()
      ->check(CLI::IsMember({"nmqj", "rk4", "pint"}));
  run_cmd->add_option("--model", run_args.model_path, "Model JSON file")->required();
  run_cmd->add_option("--n", run_args.n, "Ensemble size (nmqj)")->check(CLI::PositiveNumber);
  run_cmd->add_option("--dt", run_args.dt, "Time step")->check(CLI::PositiveNumber);
  run_cmd->add_option("--t", run_args.t_final, "Final time")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--seed", run_args.seed, "Master RNG seed (nmqj)");
  run_cmd->add_option("--stride", run_args.stride, "Record every K steps")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run_args.out_dir, "Output directory (default run_<method>)");
  run_cmd->add_option("--threads", run_args.threads, "OpenMP threads; 1 runs the serial kernels")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--ray-tol", run_args.ray_tol, "Ray equivalence tolerance");
  run_cmd->add_option("--p-max", run_args.p_max, "Per-ray jump probability limit (nmqj)");
  run_cmd->add_option("--max-rays", run_args.max_rays, "Ray cap (pint)");
  run_cmd->add_option("--observable", run_args.observables, "Observable columns: pop<i>, sx, sy, sz or model-defined");

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two run directories on their shared time grid");
  cmp_cmd->add_option("run_a", cmp_args.dir_a)->required();
  cmp_cmd->add_option("run_b", cmp_args.dir_b)->required();
  cmp_cmd->add_option("--tol", cmp_args.tol, "Absolute tolerance for deterministic pairs");
  cmp_cmd->add_option("--k", cmp_args.k, "Sigma multiple when a stochastic run is involved");
  cmp_cmd->add_option("--report", cmp_args.report, "Report path");

  auto* presets_cmd = app.add_subcommand("presets", "List or render built-in models");
  presets_cmd->require_subcommand(1);
  presets_cmd->add_subcommand("list", "List presets and their parameters");
  PresetArgs preset_args;
  auto* render_cmd = presets_cmd->add_subcommand("render", "Write a preset as an explicit model file");
  render_cmd->add_option("name", preset_args.name)->required();
  render_cmd->add_option("-o,--output", preset_args.output, "Output file (default stdout)");
  const std::vector<std::pair<std::string, std::string>> param_flags = {
      {"--gamma", "gamma"},     {"--delta0", "delta0"},     {"--omega", "omega"},
      {"--amplitude", "amplitude"}, {"--offset", "offset"}, {"--t-switch", "t_switch"},
      {"--gamma-minus", "gamma_minus"}};
  std::map<std::string, double> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const auto& [flag, key] : param_flags) {
    flag_opts[key] = render_cmd->add_option(flag, flag_values[key], "Preset parameter " + key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_code::ok : exit_code::usage;
  }

  try {
    if (*run_cmd) return cmd_run(run_args, out, err);
    if (*cmp_cmd) return cmd_compare(cmp_args, out, err);
    if (presets_cmd->got_subcommand("list")) return cmd_presets_list(out);
    for (const auto& [key, opt] : flag_opts) {
      if (opt->count() > 0) preset_args.values[key] = flag_values[key];
    }
    return cmd_presets_render(preset_args, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
}

}  // namespace nmqj
