#include "covertnet/game.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "covertnet/optim.hpp"
#include "covertnet/stable.hpp"

namespace covertnet {
namespace {

Vec2 clip_to_box(const Vec2& p, const Box2& box) {
  return {std::clamp(p[0], box.lo[0], box.hi[0]), std::clamp(p[1], box.lo[1], box.hi[1])};
}

double rel_norm(const Vec2& a, const Vec2& b, const Vec2& span) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double scale = span[i] > 0.0 ? span[i] : 1.0;
    const double d = (a[i] - b[i]) / scale;
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double detection_error(const PowerPair& powers, double tau, const NetworkParams& params,
                       const QuadratureSettings& quad) {
  return fa_probability(powers, tau, params, quad) + md_probability(powers, tau, params, quad);
}

DetectorSolution best_response_tau(const PowerPair& powers, const NetworkParams& params,
                                   const QuadratureSettings& quad, int grid_n) {
  if (grid_n < 4) throw std::invalid_argument("best_response_tau: grid too small");
  const StableScale scale = adversary_scale(params, powers);
  const double median =
      scale.iota > 0.0 ? interference_quantile(0.5, scale, quad) : 0.0;
  const double tau_lo = params.noise_a * (1.0 + 1e-6);
  const double tau_hi = params.noise_a + 1e3 * (powers.pd + median);

  const auto error_at = [&](double tau) { return detection_error(powers, tau, params, quad); };

  // Coarse log-spaced scan.
  std::vector<double> taus(static_cast<size_t>(grid_n));
  std::vector<double> errs(static_cast<size_t>(grid_n));
  const double log_lo = std::log(tau_lo);
  const double log_hi = std::log(tau_hi);
  double best_err = 2.0;
  int best_idx = 0;
  for (int i = 0; i < grid_n; ++i) {
    const double t = std::exp(log_lo + (log_hi - log_lo) * i / (grid_n - 1));
    taus[static_cast<size_t>(i)] = t;
    const double e = error_at(t);
    errs[static_cast<size_t>(i)] = e;
    if (e < best_err) {
      best_err = e;
      best_idx = i;
    }
  }

  DetectorSolution sol;
  const auto fill = [&](double tau) {
    sol.tau_star = tau;
    sol.fa = fa_probability(powers, tau, params, quad);
    sol.md = md_probability(powers, tau, params, quad);
    sol.error = sol.fa + sol.md;
  };

  const double spread = *std::max_element(errs.begin(), errs.end()) -
                        *std::min_element(errs.begin(), errs.end());
  if (spread < 1e-12) {
    fill(tau_lo);
    sol.degenerate = true;
    return sol;
  }

  // Golden-section refinement inside the bracketing interval, in log tau so
  // the stopping rule is |d tau| / tau <= 1e-6.
  const size_t lo_idx = static_cast<size_t>(std::max(0, best_idx - 1));
  const size_t hi_idx = static_cast<size_t>(std::min(grid_n - 1, best_idx + 1));
  const double refined_log = golden_section_min(
      [&](double lt) { return error_at(std::exp(lt)); }, std::log(taus[lo_idx]),
      std::log(taus[hi_idx]), 1e-6);
  const double refined = std::exp(refined_log);

  // Argmin dominance over the scanned grid must hold exactly.
  if (error_at(refined) <= best_err) {
    fill(refined);
  } else {
    fill(taus[static_cast<size_t>(best_idx)]);
  }
  return sol;
}

double default_t_max(const NetworkParams& params) { return 1e6 * params.noise_u; }

double utility(const PowerPair& powers, const NetworkParams& params, double t_max,
               const QuadratureSettings& quad) {
  const double reward = params.phi_d * d2d_success_probability(powers, params);
  const double cost = params.phi_c * (params.lambda_u / params.lambda_d) *
                      mean_d2d_interference(powers, params, t_max, quad);
  return reward - cost;
}

XiValues xi(const PowerPair& powers, const NetworkParams& params, double t_max,
            const QuadratureSettings& quad) {
  XiValues v;
  v.xi0 = -utility(powers, params, t_max, quad);
  const DetectorSolution det = best_response_tau(powers, params, quad);
  v.xi1 = -det.error + (1.0 - params.eps_covert);
  const double rate_with = ergodic_rate(powers, params, /*include_d2d=*/true, quad);
  const double rate_without = ergodic_rate(powers, params, /*include_d2d=*/false, quad);
  v.xi2 = -rate_with + (1.0 - params.eps_qos) * rate_without;
  return v;
}

std::array<SurrogateModel, 3> surrogate(const Vec2& center, const std::array<double, 3>& values,
                                        const std::array<Vec2, 3>& gradients, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("surrogate: delta must be positive");
  std::array<SurrogateModel, 3> models;
  for (int i = 0; i < 3; ++i) {
    models[static_cast<size_t>(i)] = {center, values[static_cast<size_t>(i)],
                                      gradients[static_cast<size_t>(i)], delta};
  }
  return models;
}

SurrogateSolution solve_surrogate(const std::array<SurrogateModel, 3>& models, const Box2& box,
                                  int grid_n) {
  if (!(box.lo[0] <= box.hi[0] && box.lo[1] <= box.hi[1])) {
    throw std::invalid_argument("solve_surrogate: empty box");
  }
  if (grid_n < 2) grid_n = 2;

  const auto violation = [&](const Vec2& p) {
    return std::max(0.0, models[1].eval(p)) + std::max(0.0, models[2].eval(p));
  };
  const auto feasible_at = [&](const Vec2& p) {
    return models[1].eval(p) <= 0.0 && models[2].eval(p) <= 0.0;
  };
  // Lower objective wins; near-ties break toward smaller coordinates.
  const auto better = [](double obj_a, const Vec2& a, double obj_b, const Vec2& b) {
    if (obj_a < obj_b - 1e-12) return true;
    if (obj_b < obj_a - 1e-12) return false;
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
  };

  const Vec2 span = {box.hi[0] - box.lo[0], box.hi[1] - box.lo[1]};
  const auto grid_point = [&](int i, int j) -> Vec2 {
    const double fx = grid_n > 1 ? static_cast<double>(i) / (grid_n - 1) : 0.0;
    const double fy = grid_n > 1 ? static_cast<double>(j) / (grid_n - 1) : 0.0;
    return {box.lo[0] + span[0] * fx, box.lo[1] + span[1] * fy};
  };

  bool any_feasible = false;
  Vec2 best{box.lo};
  double best_score = 0.0;
  bool have_best = false;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const Vec2 p = grid_point(i, j);
      const bool feas = feasible_at(p);
      if (feas && !any_feasible) {
        any_feasible = true;
        have_best = false;  // restart selection among feasible points
      }
      if (any_feasible && !feas) continue;
      const double score = any_feasible ? models[0].eval(p) : violation(p);
      if (!have_best || better(score, p, best_score, best)) {
        best = p;
        best_score = score;
        have_best = true;
      }
    }
  }

  // Compass refinement down to 1e-8 of the box span.
  const double max_span = std::max(span[0], span[1]);
  double step = max_span / std::max(1, grid_n - 1);
  const double min_step = 1e-8 * (max_span > 0.0 ? max_span : 1.0);
  const auto score_of = [&](const Vec2& p) {
    return any_feasible ? models[0].eval(p) : violation(p);
  };
  while (step > min_step) {
    bool moved = false;
    static constexpr int dx[4] = {1, -1, 0, 0};
    static constexpr int dy[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const Vec2 cand =
          clip_to_box({best[0] + step * dx[d], best[1] + step * dy[d]}, box);
      if (cand == best) continue;
      if (any_feasible && !feasible_at(cand)) continue;
      const double s = score_of(cand);
      if (s < best_score) {
        best = cand;
        best_score = s;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }

  // Exact KKT polish.  All three models share the prox curvature 1/(2 delta),
  // so each constraint region is a disk and the objective's level sets are
  // circles around its unconstrained minimizer: every KKT point of the
  // box-and-two-disks program lies in a small finite candidate set.  The
  // compass result is kept whenever it scores at least as well, so this can
  // only improve on the grid search (which stalls on curved active
  // boundaries).
  const double delta = models[0].delta;
  const auto apex = [&](const SurrogateModel& m) -> Vec2 {
    return {m.center[0] - delta * m.grad[0], m.center[1] - delta * m.grad[1]};
  };
  // m.eval(p) = value + (|p - apex|^2 - delta^2 |g|^2) / (2 delta), so the
  // zero level set is a circle of this squared radius around the apex.
  const auto radius_sq = [&](const SurrogateModel& m) {
    const double g2 = m.grad[0] * m.grad[0] + m.grad[1] * m.grad[1];
    return delta * delta * g2 - 2.0 * delta * m.value;
  };
  const Vec2 a0 = apex(models[0]);
  std::vector<Vec2> cands;
  cands.reserve(32);
  cands.push_back(clip_to_box(a0, box));
  for (int i = 1; i <= 2; ++i) {
    const SurrogateModel& m = models[static_cast<size_t>(i)];
    const double r2 = radius_sq(m);
    if (r2 <= 0.0) continue;  // constraint infeasible or a single point
    const Vec2 ai = apex(m);
    const double r = std::sqrt(r2);
    // Projection of the objective apex onto the constraint circle.
    const double dist = std::hypot(a0[0] - ai[0], a0[1] - ai[1]);
    if (dist > 0.0) {
      cands.push_back({ai[0] + r * (a0[0] - ai[0]) / dist, ai[1] + r * (a0[1] - ai[1]) / dist});
    }
    // Intersections of the constraint circle with each box edge.
    for (int axis = 0; axis < 2; ++axis) {
      for (double edge : {box.lo[axis], box.hi[axis]}) {
        const double off = edge - ai[axis];
        const double h2 = r2 - off * off;
        if (h2 < 0.0) continue;
        const double h = std::sqrt(h2);
        Vec2 q;
        q[axis] = edge;
        q[1 - axis] = ai[1 - axis] + h;
        cands.push_back(q);
        q[1 - axis] = ai[1 - axis] - h;
        cands.push_back(q);
      }
    }
  }
  // Intersections of the two constraint circles.
  {
    const double r2a = radius_sq(models[1]);
    const double r2b = radius_sq(models[2]);
    const Vec2 ca = apex(models[1]);
    const Vec2 cb = apex(models[2]);
    const double d = std::hypot(cb[0] - ca[0], cb[1] - ca[1]);
    if (r2a > 0.0 && r2b > 0.0 && d > 0.0) {
      const double along = (d * d + r2a - r2b) / (2.0 * d);
      const double h2 = r2a - along * along;
      if (h2 >= 0.0) {
        const double h = std::sqrt(h2);
        const Vec2 u{(cb[0] - ca[0]) / d, (cb[1] - ca[1]) / d};
        const Vec2 mid{ca[0] + along * u[0], ca[1] + along * u[1]};
        cands.push_back({mid[0] - h * u[1], mid[1] + h * u[0]});
        cands.push_back({mid[0] + h * u[1], mid[1] - h * u[0]});
      }
    }
  }
  cands.push_back({box.lo[0], box.lo[1]});
  cands.push_back({box.lo[0], box.hi[1]});
  cands.push_back({box.hi[0], box.lo[1]});
  cands.push_back({box.hi[0], box.hi[1]});

  // Feasibility slack absorbs the roundoff of points constructed to sit
  // exactly on a constraint boundary.
  const double slack = 1e-10 * (1.0 + std::fabs(models[1].value) + std::fabs(models[2].value));
  for (const Vec2& cand : cands) {
    if (cand[0] < box.lo[0] - slack || cand[0] > box.hi[0] + slack ||
        cand[1] < box.lo[1] - slack || cand[1] > box.hi[1] + slack) {
      continue;
    }
    const Vec2 p = clip_to_box(cand, box);
    if (models[1].eval(p) > slack || models[2].eval(p) > slack) continue;
    const double s = models[0].eval(p);
    if (!any_feasible || s < best_score) {
      any_feasible = true;
      best = p;
      best_score = s;
    }
  }

  return {best, any_feasible};
}

namespace {

struct XiEvaluator {
  const NetworkParams& params;
  double t_max;
  const QuadratureSettings& quad;

  std::array<double, 3> operator()(const Vec2& log_powers) const {
    const PowerPair powers{std::exp(log_powers[0]), std::exp(log_powers[1])};
    const XiValues v = xi(powers, params, t_max, quad);
    return {v.xi0, v.xi1, v.xi2};
  }
};

// Largest delta from a halving schedule such that the surrogates majorize the
// true Xi on points sampled around the center.
double calibrate_delta(const XiEvaluator& eval_xi, const Vec2& center,
                       const std::array<double, 3>& values, const std::array<Vec2, 3>& grads,
                       const Box2& box) {
  const Vec2 span = {box.hi[0] - box.lo[0], box.hi[1] - box.lo[1]};
  std::mt19937_64 rng(0x5ca1ab1eULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  constexpr int kSamples = 12;
  std::vector<Vec2> points;
  std::vector<std::array<double, 3>> true_values;
  points.reserve(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const Vec2 p = clip_to_box(
        {center[0] + 0.1 * span[0] * unif(rng), center[1] + 0.1 * span[1] * unif(rng)}, box);
    points.push_back(p);
    true_values.push_back(eval_xi(p));
  }

  double delta = 1.0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    const auto models = surrogate(center, values, grads, delta);
    bool majorizes = true;
    for (size_t s = 0; s < points.size() && majorizes; ++s) {
      for (int i = 0; i < 3; ++i) {
        if (models[static_cast<size_t>(i)].eval(points[s]) <
            true_values[s][static_cast<size_t>(i)] - 1e-9) {
          majorizes = false;
          break;
        }
      }
    }
    if (majorizes) return delta;
    delta *= 0.5;
  }
  return delta;
}

}  // namespace

EquilibriumResult run_algorithm1(const PowerPair& start, const NetworkParams& params,
                                 const SolverOptions& options, const QuadratureSettings& quad) {
  if (!(options.gamma >= 0.0 && options.gamma < 1.0)) {
    throw std::invalid_argument("run_algorithm1: gamma must lie in [0,1)");
  }
  if (!(options.tol > 0.0)) throw std::invalid_argument("run_algorithm1: tol must be positive");
  if (!in_power_box(params, start)) {
    throw std::invalid_argument("run_algorithm1: start outside the power box");
  }

  const double t_max = options.t_max > 0.0 ? options.t_max : default_t_max(params);
  const Box2 box = {{std::log(params.pd_min), std::log(params.pc_min)},
                    {std::log(params.pd_max), std::log(params.pc_max)}};
  const Vec2 span = {box.hi[0] - box.lo[0], box.hi[1] - box.lo[1]};
  const XiEvaluator eval_xi{params, t_max, quad};

  Vec2 z = clip_to_box({std::log(start.pd), std::log(start.pc)}, box);
  double delta = options.delta;
  bool calibrated = delta > 0.0;

  EquilibriumResult result;
  bool step_converged = false;

  for (int k = 0; k < options.max_iters; ++k) {
    const std::array<double, 3> values = eval_xi(z);
    std::array<Vec2, 3> grads{};
    for (int dim = 0; dim < 2; ++dim) {
      const double h = options.fd_step * (span[dim] > 0.0 ? span[dim] : 0.0);
      if (h == 0.0) continue;  // collapsed box dimension stays pinned
      Vec2 zp = z, zm = z;
      zp[dim] += h;
      zm[dim] -= h;
      const auto fp = eval_xi(zp);
      const auto fm = eval_xi(zm);
      for (int i = 0; i < 3; ++i) {
        grads[static_cast<size_t>(i)][dim] =
            (fp[static_cast<size_t>(i)] - fm[static_cast<size_t>(i)]) / (2.0 * h);
      }
    }

    if (!calibrated) {
      delta = calibrate_delta(eval_xi, z, values, grads, box);
      calibrated = true;
    }

    const PowerPair center_powers{std::exp(z[0]), std::exp(z[1])};
    result.history.push_back(
        {center_powers, -values[0], values[1], values[2]});

    const auto models = surrogate(z, values, grads, delta);
    const SurrogateSolution sub = solve_surrogate(models, box, options.grid_n);

    Vec2 z_next;
    for (int i = 0; i < 2; ++i) {
      z_next[i] = options.gamma * z[i] + (1.0 - options.gamma) * sub.point[i];
    }
    z_next = clip_to_box(z_next, box);
    result.iterations = k + 1;
    const double step = rel_norm(z_next, z, span);
    z = z_next;
    if (step <= options.tol) {
      step_converged = true;
      break;
    }
  }

  const PowerPair final_powers{std::exp(z[0]), std::exp(z[1])};
  result.powers = final_powers;
  result.detector = best_response_tau(final_powers, params, quad, options.tau_grid_n);
  const XiValues final_xi = xi(final_powers, params, t_max, quad);
  result.utility = -final_xi.xi0;
  result.xi1 = final_xi.xi1;
  result.xi2 = final_xi.xi2;
  result.feasible = final_xi.feasible(options.constraint_tol);
  result.converged = step_converged && result.feasible;
  result.history.push_back({final_powers, result.utility, result.xi1, result.xi2});
  return result;
}

}  // namespace covertnet
