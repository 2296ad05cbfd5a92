#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covertnet/config.hpp"
#include "covertnet/harness.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::optional<long long> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_seed) {
  cmd->add_option("--config", args.config_path, "Config file (key = value lines)");
  cmd->add_option("--set", args.overrides, "Override key=value (repeatable)")
      ->take_all();
  cmd->add_option("--out", args.out_path, "Write CSV here (default: stdout)");
  auto* seed = cmd->add_option("--seed", args.seed, "RNG seed for simulation");
  if (needs_seed) seed->required();
}

covertnet::Config load_config(const CommonArgs& args) {
  covertnet::KeyValueMap kv;
  if (!args.config_path.empty()) kv = covertnet::parse_config_file(args.config_path);
  covertnet::apply_overrides(kv, args.overrides);
  if (args.seed) kv["sim.seed"] = std::to_string(*args.seed);
  return covertnet::resolve_config(kv);
}

// Writes the CSV (and its metadata sidecar when a path is given); CSV bytes
// are the determinism surface, the sidecar carries the wall clock.
void emit(const std::string& csv, const CommonArgs& args, const covertnet::Config& cfg,
          double wall_seconds) {
  if (args.out_path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + args.out_path);
  out << csv;
  out.close();
  covertnet::write_metadata_sidecar(args.out_path, cfg, wall_seconds);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic metrics, simulation, and power-control equilibrium "
               "for a D2D network sharing cellular spectrum"};
  app.require_subcommand(1);

  CommonArgs metrics_args, simulate_args, validate_args, detect_args, equilibrium_args,
      sweep_args;
  auto* metrics = app.add_subcommand("metrics", "Analytic link metrics at the operating point");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates of the same metrics");
  auto* validate =
      app.add_subcommand("validate", "Analytic-vs-simulation agreement check (3 SE gate)");
  auto* detect = app.add_subcommand("detect", "Detection-threshold scan and best response");
  auto* equilibrium = app.add_subcommand("equilibrium", "Run the power-control solver");
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter, one CSV row per value");
  add_common(metrics, metrics_args, false);
  add_common(simulate, simulate_args, true);
  add_common(validate, validate_args, true);
  add_common(detect, detect_args, false);
  add_common(equilibrium, equilibrium_args, false);
  add_common(sweep, sweep_args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (metrics->parsed()) {
      const auto cfg = load_config(metrics_args);
      emit(covertnet::run_metrics(cfg).csv, metrics_args, cfg, seconds_since(t0));
    } else if (simulate->parsed()) {
      const auto cfg = load_config(simulate_args);
      emit(covertnet::run_simulate(cfg).csv, simulate_args, cfg, seconds_since(t0));
    } else if (validate->parsed()) {
      const auto cfg = load_config(validate_args);
      const auto res = covertnet::run_validate(cfg);
      emit(res.csv, validate_args, cfg, seconds_since(t0));
      std::cerr << (res.pass ? "PASS" : "FAIL") << ": max deviation "
                << covertnet::format_double(res.max_deviation_se) << " SE (gate 3)\n";
      if (!res.pass) return 2;
    } else if (detect->parsed()) {
      const auto cfg = load_config(detect_args);
      const auto res = covertnet::run_detect(cfg);
      emit(res.csv, detect_args, cfg, seconds_since(t0));
      std::cerr << "tau_star_watt=" << covertnet::format_double(res.solution.tau_star)
                << " detection_error=" << covertnet::format_double(res.solution.error)
                << (res.solution.degenerate ? " (degenerate)" : "") << "\n";
    } else if (equilibrium->parsed()) {
      const auto cfg = load_config(equilibrium_args);
      const auto res = covertnet::run_equilibrium(cfg);
      emit(res.csv, equilibrium_args, cfg, seconds_since(t0));
      const auto& eq = res.equilibrium;
      std::cerr << "pd_watt=" << covertnet::format_double(eq.powers.pd)
                << " pc_watt=" << covertnet::format_double(eq.powers.pc)
                << " utility=" << covertnet::format_double(eq.utility)
                << " feasible=" << (eq.feasible ? 1 : 0)
                << " converged=" << (eq.converged ? 1 : 0)
                << " iterations=" << eq.iterations << "\n";
    } else if (sweep->parsed()) {
      const auto cfg = load_config(sweep_args);
      const auto res = covertnet::run_sweep(cfg);
      emit(res.csv, sweep_args, cfg, seconds_since(t0));
      if (res.n_infeasible > 0) {
        std::cerr << res.n_infeasible << " sweep point(s) infeasible\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
