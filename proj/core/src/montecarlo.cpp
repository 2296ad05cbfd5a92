#include "covertnet/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace covertnet {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Chunked map-reduce over trial indices.  Chunk size and reduction order are
// fixed, so the result is bit-identical for any worker count.
template <typename Partial, typename TrialFn>
Partial run_chunked(long n_trials, const SimConfig& sim, const Partial& init,
                    const TrialFn& per_trial) {
  constexpr long kChunk = 256;
  const long n_chunks = (n_trials + kChunk - 1) / kChunk;
  std::vector<Partial> chunk_results(static_cast<size_t>(n_chunks), init);

  int workers = sim.workers > 0 ? sim.workers
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(std::min<long>(workers, n_chunks));

  std::atomic<long> next_chunk{0};
  const auto work = [&]() {
    for (;;) {
      const long c = next_chunk.fetch_add(1);
      if (c >= n_chunks) break;
      Partial acc = init;
      const long begin = c * kChunk;
      const long end = std::min(n_trials, begin + kChunk);
      for (long trial = begin; trial < end; ++trial) {
        auto rng = trial_rng(sim.seed, static_cast<std::uint64_t>(trial));
        per_trial(trial, rng, acc);
      }
      chunk_results[static_cast<size_t>(c)] = acc;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }

  Partial total = init;
  for (const auto& part : chunk_results) total.merge(part);
  return total;
}

// Aggregate power at the origin from one thinned PPP population on the
// simulation disk, optionally excluding points inside min_radius.  ALOHA
// thinning of a PPP is again a PPP, so the active set is sampled directly at
// density * activation.
double interference_at_origin(std::mt19937_64& rng, double density, double activation,
                              double power, double radius, double alpha,
                              double min_radius = 0.0) {
  const double active_density = density * activation;
  if (active_density <= 0.0) return 0.0;
  const double area = kPi * radius * radius;
  std::poisson_distribution<long> count_dist(active_density * area);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> fading(1.0);
  const long count = count_dist(rng);
  const double r2_max = radius * radius;
  const double r2_min = min_radius * min_radius;
  const bool alpha4 = alpha == 4.0;
  double sum = 0.0;
  for (long i = 0; i < count; ++i) {
    const double r2 = unif(rng) * r2_max;  // uniform on the disk
    const double h = fading(rng);          // always consumed: pairing across calls
    if (r2 < r2_min) continue;
    const double path = alpha4 ? 1.0 / (r2 * r2) : std::pow(r2, -0.5 * alpha);
    sum += power * h * path;
  }
  return sum;
}

double rayleigh_distance(std::mt19937_64& rng, double lambda) {
  std::exponential_distribution<double> dist(kPi * lambda);
  return std::sqrt(dist(rng));
}

struct MeanAcc {
  double sum = 0.0;
  double sum_sq = 0.0;
  long n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  void merge(const MeanAcc& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  Estimate estimate() const {
    Estimate e;
    e.n = n;
    if (n == 0) return e;
    e.mean = sum / static_cast<double>(n);
    if (n > 1) {
      const double var =
          std::max(0.0, (sum_sq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1));
      e.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return e;
  }
};

Estimate binomial_estimate(long hits, long n) {
  Estimate e;
  e.n = n;
  if (n == 0) return e;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  e.mean = p;
  e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return e;
}

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial_index) {
  const std::uint64_t s = splitmix64(splitmix64(seed) ^ splitmix64(trial_index + 0x51ed2701ULL));
  return std::mt19937_64(s);
}

std::vector<Point> sample_ppp_disk(double density, double radius, std::mt19937_64& rng) {
  if (density < 0.0) throw std::invalid_argument("sample_ppp_disk: density must be >= 0");
  std::vector<Point> points;
  if (density == 0.0) return points;
  std::poisson_distribution<long> count_dist(density * kPi * radius * radius);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const long count = count_dist(rng);
  points.reserve(static_cast<size_t>(count));
  for (long i = 0; i < count; ++i) {
    const double r = radius * std::sqrt(unif(rng));
    const double phi = 2.0 * kPi * unif(rng);
    points.push_back({r * std::cos(phi), r * std::sin(phi)});
  }
  return points;
}

std::vector<FaMdEstimate> estimate_fa_md(const PowerPair& powers,
                                         const std::vector<double>& tau_grid,
                                         const NetworkParams& p, const SimConfig& sim) {
  if (tau_grid.empty()) throw std::invalid_argument("estimate_fa_md: tau_grid must be nonempty");

  struct Acc {
    std::vector<long> fa;
    std::vector<long> md;
    long n = 0;
    void merge(const Acc& o) {
      for (size_t i = 0; i < fa.size(); ++i) {
        fa[i] += o.fa[i];
        md[i] += o.md[i];
      }
      n += o.n;
    }
  };
  Acc init;
  init.fa.assign(tau_grid.size(), 0);
  init.md.assign(tau_grid.size(), 0);

  const Acc total = run_chunked(sim.n_trials, sim, init, [&](long, std::mt19937_64& rng, Acc& acc) {
    const double r0 = rayleigh_distance(rng, p.lambda_a);
    std::exponential_distribution<double> fading(1.0);
    const double h0 = fading(rng);
    const double interference =
        interference_at_origin(rng, p.lambda_d, p.p_active_d, powers.pd, sim.window_radius,
                               p.alpha) +
        interference_at_origin(rng, p.lambda_b, p.p_active_c, powers.pc, sim.window_radius,
                               p.alpha);
    const double y_idle = interference + p.noise_a;
    const double y_active = powers.pd * h0 * std::pow(r0, -p.alpha) + y_idle;
    for (size_t i = 0; i < acc.fa.size(); ++i) {
      if (y_idle > tau_grid[i]) ++acc.fa[i];
      if (y_active < tau_grid[i]) ++acc.md[i];
    }
    ++acc.n;
  });

  std::vector<FaMdEstimate> out(tau_grid.size());
  for (size_t i = 0; i < tau_grid.size(); ++i) {
    out[i].fa = binomial_estimate(total.fa[i], total.n);
    out[i].md = binomial_estimate(total.md[i], total.n);
  }
  return out;
}

Estimate estimate_d2d_success(const PowerPair& powers, const NetworkParams& p,
                              const SimConfig& sim) {
  struct Acc {
    long hits = 0;
    long n = 0;
    void merge(const Acc& o) {
      hits += o.hits;
      n += o.n;
    }
  };
  const Acc total =
      run_chunked(sim.n_trials, sim, Acc{}, [&](long, std::mt19937_64& rng, Acc& acc) {
        std::exponential_distribution<double> fading(1.0);
        const double h = fading(rng);
        const double signal = powers.pd * h * std::pow(p.link_dist, -p.alpha);
        const double interference =
            interference_at_origin(rng, p.lambda_d, p.p_active_d, powers.pd, sim.window_radius,
                                   p.alpha) +
            interference_at_origin(rng, p.lambda_b, p.p_active_c, powers.pc, sim.window_radius,
                                   p.alpha);
        if (signal > p.theta_d * (interference + p.noise_rx)) ++acc.hits;
        ++acc.n;
      });
  return binomial_estimate(total.hits, total.n);
}

Estimate estimate_ergodic_rate(const PowerPair& powers, const NetworkParams& p,
                               const SimConfig& sim, bool include_d2d) {
  const auto total =
      run_chunked(sim.n_trials, sim, MeanAcc{}, [&](long, std::mt19937_64& rng, MeanAcc& acc) {
        const double r_bu = rayleigh_distance(rng, p.lambda_b);
        std::exponential_distribution<double> fading(1.0);
        const double h = fading(rng);
        const double signal = powers.pc * h * std::pow(r_bu, -p.alpha);
        // Interfering BSs lie outside the serving distance.
        const double i_c = interference_at_origin(rng, p.lambda_b, p.p_active_c, powers.pc,
                                                  sim.window_radius, p.alpha, r_bu);
        const double i_d = interference_at_origin(rng, p.lambda_d, p.p_active_d, powers.pd,
                                                  sim.window_radius, p.alpha);
        const double denom = p.noise_u + i_c + (include_d2d ? i_d : 0.0);
        const double sinr = signal / denom;
        acc.add(std::log2(1.0 + sinr));
      });
  return total.estimate();
}

Estimate estimate_mean_interference(const PowerPair& powers, const NetworkParams& p,
                                    const SimConfig& sim) {
  if (!sim.censor_at.has_value()) {
    throw std::invalid_argument("estimate_mean_interference: censor_at is required");
  }
  const double censor = *sim.censor_at;
  const auto total =
      run_chunked(sim.n_trials, sim, MeanAcc{}, [&](long, std::mt19937_64& rng, MeanAcc& acc) {
        const double i_d = interference_at_origin(rng, p.lambda_d, p.p_active_d, powers.pd,
                                                  sim.window_radius, p.alpha);
        acc.add(std::min(i_d, censor));
      });
  return total.estimate();
}

Estimate estimate_interference_laplace(const PowerPair& powers, double s,
                                       const NetworkParams& p, const SimConfig& sim) {
  const auto total =
      run_chunked(sim.n_trials, sim, MeanAcc{}, [&](long, std::mt19937_64& rng, MeanAcc& acc) {
        const double interference =
            interference_at_origin(rng, p.lambda_d, p.p_active_d, powers.pd, sim.window_radius,
                                   p.alpha) +
            interference_at_origin(rng, p.lambda_b, p.p_active_c, powers.pc, sim.window_radius,
                                   p.alpha);
        acc.add(std::exp(-s * interference));
      });
  return total.estimate();
}

}  // namespace covertnet
