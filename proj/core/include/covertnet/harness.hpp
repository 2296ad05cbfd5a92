#pragma once

#include <string>
#include <vector>

#include "covertnet/config.hpp"
#include "covertnet/game.hpp"
#include "covertnet/montecarlo.hpp"

namespace covertnet {

inline constexpr const char* kToolVersion = "covertnet 0.1.0";

// Deterministic double formatting shared by every CSV writer.
std::string format_double(double v);

// RFC-4180-style field quoting.
std::string csv_field(const std::string& s);

struct MetricsResult {
  std::vector<std::pair<std::string, double>> rows;
  std::string csv;  // "metric,value" table
};

struct ValidatePair {
  std::string metric;
  double analytic = 0.0;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double deviation_se = 0.0;  // |analytic - mc| in SE units
};

struct ValidateResult {
  std::vector<ValidatePair> pairs;
  double max_deviation_se = 0.0;
  bool pass = false;
  std::string csv;
};

struct DetectResult {
  DetectorSolution solution;
  std::string csv;  // tau scan table
};

struct SimulateResult {
  std::vector<std::pair<std::string, Estimate>> rows;
  std::string csv;
};

struct EquilibriumRunResult {
  EquilibriumResult equilibrium;
  std::string csv;  // iterate trace
};

struct SweepResult {
  std::string csv;
  int n_infeasible = 0;
};

MetricsResult run_metrics(const Config& cfg);
ValidateResult run_validate(const Config& cfg);
DetectResult run_detect(const Config& cfg);
SimulateResult run_simulate(const Config& cfg);
EquilibriumRunResult run_equilibrium(const Config& cfg);
SweepResult run_sweep(const Config& cfg);

// Metadata sidecar (config snapshot, hash, seed, version, wall clock) next
// to a CSV output; written to <csv_path>.meta.json.
void write_metadata_sidecar(const std::string& csv_path, const Config& cfg,
                            double wall_seconds);

}  // namespace covertnet
