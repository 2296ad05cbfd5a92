#pragma once

#include <array>
#include <vector>

#include "covertnet/analytic.hpp"
#include "covertnet/params.hpp"
#include "covertnet/quadrature.hpp"

namespace covertnet {

using Vec2 = std::array<double, 2>;

// Lower-stage best response: the adversary's optimal detection threshold and
// the error probabilities attained there.
struct DetectorSolution {
  double tau_star = 0.0;
  double fa = 0.0;
  double md = 0.0;
  double error = 0.0;
  bool degenerate = false;  // flat objective, boundary solution reported
};

struct XiValues {
  double xi0 = 0.0;  // negated utility
  double xi1 = 0.0;  // covertness-constraint residual
  double xi2 = 0.0;  // QoS-constraint residual
  bool feasible(double tol = 0.0) const { return xi1 <= tol && xi2 <= tol; }
};

// Prox-linear quadratic model around a center point.
struct SurrogateModel {
  Vec2 center{};
  double value = 0.0;
  Vec2 grad{};
  double delta = 1.0;

  double eval(const Vec2& p) const {
    const double dx = p[0] - center[0];
    const double dy = p[1] - center[1];
    return value + grad[0] * dx + grad[1] * dy + (dx * dx + dy * dy) / (2.0 * delta);
  }
};

struct Box2 {
  Vec2 lo{};
  Vec2 hi{};
};

struct SurrogateSolution {
  Vec2 point{};
  bool feasible = true;  // false: minimum-violation point of an infeasible surrogate
};

struct IterateRecord {
  PowerPair powers;
  double utility = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
};

struct EquilibriumResult {
  PowerPair powers;
  DetectorSolution detector;
  double utility = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  bool converged = false;
  bool feasible = false;
  int iterations = 0;
  std::vector<IterateRecord> history;
};

struct SolverOptions {
  double gamma = 0.5;          // damping of the iterate update
  double delta = 0.0;          // prox weight; 0 calibrates by halving
  double tol = 1e-4;           // box-relative step tolerance
  double constraint_tol = 1e-3;
  int max_iters = 150;
  double fd_step = 1e-3;       // finite-difference step, fraction of log-box span
  double t_max = 0.0;          // interference truncation; 0 = 1e6 * noise_u
  int grid_n = 64;             // multi-start grid per dimension in solve_surrogate
  int tau_grid_n = 96;         // coarse scan size in best_response_tau
};

double detection_error(const PowerPair& powers, double tau, const NetworkParams& params,
                       const QuadratureSettings& quad = {});

DetectorSolution best_response_tau(const PowerPair& powers, const NetworkParams& params,
                                   const QuadratureSettings& quad = {}, int grid_n = 96);

double default_t_max(const NetworkParams& params);

double utility(const PowerPair& powers, const NetworkParams& params, double t_max,
               const QuadratureSettings& quad = {});

XiValues xi(const PowerPair& powers, const NetworkParams& params, double t_max,
            const QuadratureSettings& quad = {});

// One quadratic model per Xi function, all sharing the prox weight.
std::array<SurrogateModel, 3> surrogate(const Vec2& center, const std::array<double, 3>& values,
                                        const std::array<Vec2, 3>& gradients, double delta);

// Minimizes models[0] subject to models[1] <= 0 and models[2] <= 0 over the
// box: multi-start grid followed by compass refinement.
SurrogateSolution solve_surrogate(const std::array<SurrogateModel, 3>& models, const Box2& box,
                                  int grid_n = 64);

// Bi-level SCA loop; the detector best response is recomputed at every
// evaluation point, never cached across power changes.
EquilibriumResult run_algorithm1(const PowerPair& start, const NetworkParams& params,
                                 const SolverOptions& options = {},
                                 const QuadratureSettings& quad = {});

}  // namespace covertnet
