#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "covertnet/params.hpp"

namespace covertnet {

struct SimConfig {
  double window_radius = 100.0;  // simulation disk radius
  long n_trials = 100000;
  std::uint64_t seed = 1;
  std::optional<double> censor_at;  // clipping level for interference samples
  int workers = 0;                  // 0 = hardware concurrency
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Deterministic per-trial RNG stream: trials are order-independent and the
// reduction order is fixed, so results do not depend on the worker count.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial_index);

std::vector<Point> sample_ppp_disk(double density, double radius, std::mt19937_64& rng);

// Empirical FA/MD probabilities for each threshold in tau_grid.
struct FaMdEstimate {
  Estimate fa;
  Estimate md;
};
std::vector<FaMdEstimate> estimate_fa_md(const PowerPair& powers,
                                         const std::vector<double>& tau_grid,
                                         const NetworkParams& params, const SimConfig& sim);

Estimate estimate_d2d_success(const PowerPair& powers, const NetworkParams& params,
                              const SimConfig& sim);

Estimate estimate_ergodic_rate(const PowerPair& powers, const NetworkParams& params,
                               const SimConfig& sim, bool include_d2d);

// Censored mean of the D2D interference at the typical CU; sim.censor_at is
// required because the uncensored mean is infinite.
Estimate estimate_mean_interference(const PowerPair& powers, const NetworkParams& params,
                                    const SimConfig& sim);

// Empirical Laplace transform E[exp(-s I)] of the aggregate interference at
// the typical adversary under the idle hypothesis.
Estimate estimate_interference_laplace(const PowerPair& powers, double s,
                                       const NetworkParams& params, const SimConfig& sim);

}  // namespace covertnet
