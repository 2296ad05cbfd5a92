#include "covertnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "covertnet/analytic.hpp"
#include "covertnet/stable.hpp"

namespace covertnet {
namespace {

PowerPair clamp_to_box(const PowerPair& powers, const NetworkParams& p) {
  return {std::clamp(powers.pd, p.pd_min, p.pd_max),
          std::clamp(powers.pc, p.pc_min, p.pc_max)};
}

// Agreement between an analytic value and an MC estimate, in SE units.  For
// probabilities the SE is floored at the binomial SE implied by the analytic
// value, so an all-zero (or all-one) sample cannot divide by zero.  Absolute
// discrepancies below 1e-12 (the noise floor in watts, and far below any
// rate or probability gate) count as exact agreement, so a degenerate
// all-equal sample (an empty network yielding zero interference every trial,
// SE = 0) is not flagged over a sub-rounding difference.
double deviation_se(double analytic, double mc, double se, long n, bool probability) {
  if (std::fabs(analytic - mc) <= 1e-12) return 0.0;
  double floor = 0.0;
  if (probability && n > 0) {
    const double p = std::clamp(analytic, 0.0, 1.0);
    floor = std::sqrt(std::max(p * (1.0 - p), 1.0 / static_cast<double>(n)) /
                      static_cast<double>(n));
  }
  const double se_eff = std::max({se, floor, 1e-300});
  return std::fabs(analytic - mc) / se_eff;
}

std::string strip_unit_suffix(const std::string& key) {
  for (const char* suffix : {"_dbm", "_dbw", "_watt", "_db", "_linear"}) {
    const std::string s = suffix;
    if (key.size() > s.size() && key.compare(key.size() - s.size(), s.size(), s) == 0) {
      return key.substr(0, key.size() - s.size());
    }
  }
  return key;
}

struct SweepRow {
  std::string text;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += "\"";
  return out;
}

MetricsResult run_metrics(const Config& cfg) {
  const NetworkParams& p = validated(cfg.params);
  const PowerPair powers = cfg.powers;

  MetricsResult res;
  const DetectorSolution det =
      best_response_tau(powers, p, cfg.quad, cfg.solver.tau_grid_n);
  const XiValues v = xi(powers, p, cfg.t_max, cfg.quad);

  res.rows = {
      {"pd_watt", powers.pd},
      {"pc_watt", powers.pc},
      {"tau_star_watt", det.tau_star},
      {"fa", det.fa},
      {"md", det.md},
      {"detection_error", det.error},
      {"d2d_success", d2d_success_probability(powers, p)},
      {"cu_success_with_d2d", cu_success_with_d2d(powers, cfg.theta_c, p, cfg.quad)},
      {"cu_success_without_d2d", cu_success_without_d2d(powers, cfg.theta_c, p, cfg.quad)},
      {"rate_with_d2d", ergodic_rate(powers, p, true, cfg.quad)},
      {"rate_without_d2d", ergodic_rate(powers, p, false, cfg.quad)},
      {"mean_interference_watt", mean_d2d_interference(powers, p, cfg.t_max, cfg.quad)},
      {"utility", utility(powers, p, cfg.t_max, cfg.quad)},
      {"xi1", v.xi1},
      {"xi2", v.xi2},
  };

  std::ostringstream csv;
  csv << "metric,value\r\n";
  for (const auto& [name, value] : res.rows) {
    csv << csv_field(name) << "," << format_double(value) << "\r\n";
  }
  res.csv = csv.str();
  return res;
}

SimulateResult run_simulate(const Config& cfg) {
  const NetworkParams& p = validated(cfg.params);
  const PowerPair powers = cfg.powers;

  SimConfig sim = cfg.sim;
  if (!sim.censor_at) sim.censor_at = cfg.t_max;

  SimulateResult res;
  res.rows.emplace_back("d2d_success", estimate_d2d_success(powers, p, sim));
  res.rows.emplace_back("rate_with_d2d", estimate_ergodic_rate(powers, p, sim, true));
  res.rows.emplace_back("rate_without_d2d", estimate_ergodic_rate(powers, p, sim, false));
  res.rows.emplace_back("mean_interference_watt", estimate_mean_interference(powers, p, sim));

  // FA/MD sampled at the adversary's analytic best-response threshold.
  const DetectorSolution det =
      best_response_tau(powers, p, cfg.quad, cfg.solver.tau_grid_n);
  const auto fa_md = estimate_fa_md(powers, {det.tau_star}, p, sim);
  res.rows.emplace_back("fa", fa_md.front().fa);
  res.rows.emplace_back("md", fa_md.front().md);

  std::ostringstream csv;
  csv << "metric,mean,std_error,n\r\n";
  for (const auto& [name, est] : res.rows) {
    csv << csv_field(name) << "," << format_double(est.mean) << ","
        << format_double(est.std_error) << "," << est.n << "\r\n";
  }
  res.csv = csv.str();
  return res;
}

ValidateResult run_validate(const Config& cfg) {
  const NetworkParams& p = validated(cfg.params);
  const PowerPair powers = cfg.powers;

  // Negative-control hook: the analytic side sees scaled densities, the MC
  // side never does, so any scale != 1 must break the agreement.
  NetworkParams ap = p;
  ap.lambda_d *= cfg.validate_iota_scale;
  ap.lambda_b *= cfg.validate_iota_scale;

  SimConfig sim = cfg.sim;
  sim.censor_at = cfg.t_max;

  ValidateResult res;
  auto add = [&](const std::string& name, double analytic, const Estimate& est,
                 bool probability) {
    ValidatePair pair;
    pair.metric = name;
    pair.analytic = analytic;
    pair.mc_mean = est.mean;
    pair.mc_se = est.std_error;
    pair.deviation_se = deviation_se(analytic, est.mean, est.std_error, est.n, probability);
    res.pairs.push_back(pair);
  };

  add("d2d_success", d2d_success_probability(powers, ap),
      estimate_d2d_success(powers, p, sim), true);
  add("rate_with_d2d", ergodic_rate(powers, ap, true, cfg.quad),
      estimate_ergodic_rate(powers, p, sim, true), false);
  add("rate_without_d2d", ergodic_rate(powers, ap, false, cfg.quad),
      estimate_ergodic_rate(powers, p, sim, false), false);
  add("mean_interference_watt", mean_d2d_interference(powers, ap, cfg.t_max, cfg.quad),
      estimate_mean_interference(powers, p, sim), false);

  // Threshold grid: noise floor plus the interference median scaled over
  // three decades.
  const double median =
      interference_quantile(0.5, adversary_scale(p, powers), cfg.quad);
  std::vector<double> tau_grid;
  const int n_tau = cfg.validate_tau_points;
  for (int i = 0; i < n_tau; ++i) {
    const double f = n_tau == 1 ? 0.5 : static_cast<double>(i) / (n_tau - 1);
    tau_grid.push_back(p.noise_a + median * std::pow(10.0, -1.0 + 3.0 * f));
  }
  const auto fa_md = estimate_fa_md(powers, tau_grid, p, sim);
  for (int i = 0; i < n_tau; ++i) {
    const std::string suffix = "_tau" + std::to_string(i);
    add("fa" + suffix, fa_probability(powers, tau_grid[i], ap, cfg.quad), fa_md[i].fa, true);
    add("md" + suffix, md_probability(powers, tau_grid[i], ap, cfg.quad), fa_md[i].md, true);
  }

  res.max_deviation_se = 0.0;
  for (const auto& pair : res.pairs) {
    res.max_deviation_se = std::max(res.max_deviation_se, pair.deviation_se);
  }
  res.pass = res.max_deviation_se <= 3.0;

  std::ostringstream csv;
  csv << "metric,analytic,mc_mean,mc_std_error,deviation_se\r\n";
  for (const auto& pair : res.pairs) {
    csv << csv_field(pair.metric) << "," << format_double(pair.analytic) << ","
        << format_double(pair.mc_mean) << "," << format_double(pair.mc_se) << ","
        << format_double(pair.deviation_se) << "\r\n";
  }
  res.csv = csv.str();
  return res;
}

DetectResult run_detect(const Config& cfg) {
  const NetworkParams& p = validated(cfg.params);
  const PowerPair powers = cfg.powers;

  DetectResult res;
  res.solution = best_response_tau(powers, p, cfg.quad, cfg.solver.tau_grid_n);

  const double median =
      interference_quantile(0.5, adversary_scale(p, powers), cfg.quad);
  const double lo = p.noise_a * 1e-6;
  const double hi = 1e3 * (powers.pd + median);
  const int n = std::max(cfg.solver.tau_grid_n, 2);

  std::ostringstream csv;
  csv << "tau_watt,fa,md,detection_error\r\n";
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    const double tau = p.noise_a + lo * std::pow(hi / lo, f);
    const double fa = fa_probability(powers, tau, p, cfg.quad);
    const double md = md_probability(powers, tau, p, cfg.quad);
    csv << format_double(tau) << "," << format_double(fa) << "," << format_double(md)
        << "," << format_double(fa + md) << "\r\n";
  }
  res.csv = csv.str();
  return res;
}

EquilibriumRunResult run_equilibrium(const Config& cfg) {
  const NetworkParams& p = validated(cfg.params);

  EquilibriumRunResult res;
  res.equilibrium = run_algorithm1(clamp_to_box(cfg.powers, p), p, cfg.solver, cfg.quad);

  std::ostringstream csv;
  csv << "iter,pd_watt,pc_watt,utility,xi1,xi2\r\n";
  int iter = 0;
  for (const auto& rec : res.equilibrium.history) {
    csv << iter++ << "," << format_double(rec.powers.pd) << ","
        << format_double(rec.powers.pc) << "," << format_double(rec.utility) << ","
        << format_double(rec.xi1) << "," << format_double(rec.xi2) << "\r\n";
  }
  res.csv = csv.str();
  return res;
}

SweepResult run_sweep(const Config& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep requested but no sweep.variable configured");
  const SweepSpec& spec = *cfg.sweep;

  // Per-point raw map: drop the sweep block and any unit variant of the swept
  // key, then overlay companions and the point value.
  KeyValueMap base = cfg.snapshot;
  for (auto it = base.begin(); it != base.end();) {
    if (it->first.rfind("sweep.", 0) == 0 ||
        strip_unit_suffix(it->first) == strip_unit_suffix(spec.variable)) {
      it = base.erase(it);
    } else {
      ++it;
    }
  }
  for (const auto& [k, v] : spec.companions) {
    for (auto it = base.begin(); it != base.end();) {
      if (strip_unit_suffix(it->first) == strip_unit_suffix(k)) {
        it = base.erase(it);
      } else {
        ++it;
      }
    }
    base[k] = v;
  }

  const long n = static_cast<long>(spec.values.size());
  std::vector<SweepRow> rows(n);
  std::atomic<long> next{0};
  std::atomic<int> n_infeasible{0};

  auto work = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      KeyValueMap kv = base;
      kv[spec.variable] = format_double(spec.values[i]);
      const Config point = resolve_config(kv);
      const NetworkParams& p = point.params;

      PowerPair powers = point.powers;
      DetectorSolution det;
      bool infeasible = false;
      bool converged = true;
      int iterations = 0;
      double util = 0.0;

      if (spec.target == "equilibrium") {
        const EquilibriumResult eq =
            run_algorithm1(clamp_to_box(powers, p), p, point.solver, point.quad);
        powers = eq.powers;
        det = eq.detector;
        infeasible = !eq.feasible;
        converged = eq.converged;
        iterations = eq.iterations;
        util = infeasible ? 0.0 : eq.utility;
      } else {
        det = best_response_tau(powers, p, point.quad, point.solver.tau_grid_n);
        const XiValues v = xi(powers, p, point.t_max, point.quad);
        infeasible = !v.feasible(point.solver.constraint_tol);
        util = infeasible ? 0.0 : utility(powers, p, point.t_max, point.quad);
      }
      if (infeasible) n_infeasible.fetch_add(1);

      std::ostringstream row;
      row << csv_field(spec.variable) << "," << format_double(spec.values[i]) << ","
          << format_double(powers.pd) << "," << format_double(powers.pc) << ","
          << format_double(det.tau_star) << "," << format_double(det.fa) << ","
          << format_double(det.md) << "," << format_double(det.error) << ","
          << format_double(d2d_success_probability(powers, p)) << ","
          << format_double(ergodic_rate(powers, p, true, point.quad)) << ","
          << format_double(ergodic_rate(powers, p, false, point.quad)) << ","
          << format_double(mean_d2d_interference(powers, p, point.t_max, point.quad)) << ","
          << format_double(util) << "," << (infeasible ? 1 : 0) << ","
          << (converged ? 1 : 0) << "," << iterations << "\r\n";
      rows[i].text = row.str();
    }
  };

  int workers = spec.workers;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp<int>(workers, 1, static_cast<int>(n));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SweepResult res;
  res.n_infeasible = n_infeasible.load();
  std::ostringstream csv;
  csv << "variable,value,pd_watt,pc_watt,tau_star_watt,fa,md,detection_error,"
         "d2d_success,rate_with,rate_without,mean_interference_watt,utility,"
         "infeasible,converged,iterations\r\n";
  for (const auto& row : rows) csv << row.text;
  res.csv = csv.str();
  return res;
}

void write_metadata_sidecar(const std::string& csv_path, const Config& cfg,
                            double wall_seconds) {
  nlohmann::json j;
  j["version"] = kToolVersion;
  j["config_hash"] = config_hash(cfg.snapshot);
  j["seed"] = cfg.sim.seed;
  j["wall_seconds"] = wall_seconds;
  nlohmann::json snap = nlohmann::json::object();
  for (const auto& [k, v] : cfg.snapshot) snap[k] = v;
  j["config"] = snap;
  std::ofstream out(csv_path + ".meta.json");
  if (!out) throw std::runtime_error("cannot write metadata sidecar for " + csv_path);
  out << j.dump(2) << "\n";
}

}  // namespace covertnet
