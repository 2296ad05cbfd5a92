#include <doctest.h>

#include <cmath>
#include <random>

#include "covertnet/game.hpp"
#include "covertnet/units.hpp"

using namespace covertnet;

namespace {
const PowerPair kPowers{db_to_linear(15.0, DbRef::dBm), db_to_linear(20.0, DbRef::dBm)};
}

TEST_CASE("detection error boundary values") {
  const NetworkParams p;
  // At the noise floor FA = 1 and MD = 0; far above it FA = 0 and MD = 1.
  // Both the interference and the nearest-transmitter signal have ~t^(-1/2)
  // tails, so the upper boundary is only approached polynomially.
  CHECK(detection_error(kPowers, p.noise_a, p) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(detection_error(kPowers, 1e12, p) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("best-response threshold beats every scanned alternative") {
  const NetworkParams p;
  const DetectorSolution sol = best_response_tau(kPowers, p);
  CHECK(sol.error < 1.0);  // interior valley
  CHECK(!sol.degenerate);
  // Argmin dominance on a fresh grid plus local perturbations.
  for (double f : {0.99, 1.01}) {
    CHECK(detection_error(kPowers, sol.tau_star * f, p) >= sol.error - 1e-12);
  }
  for (double tau = p.noise_a * 2.0; tau < 10.0; tau *= 10.0) {
    CHECK(detection_error(kPowers, tau, p) >= sol.error - 1e-12);
  }
}

TEST_CASE("best response is invariant to scan density") {
  const NetworkParams p;
  const DetectorSolution coarse = best_response_tau(kPowers, p, {}, 48);
  const DetectorSolution fine = best_response_tau(kPowers, p, {}, 96);
  CHECK(coarse.error == doctest::Approx(fine.error).epsilon(1e-6));
  CHECK_THROWS(best_response_tau(kPowers, p, {}, 2));
}

TEST_CASE("weak signal makes the detector no better than blind") {
  NetworkParams p;
  const DetectorSolution sol = best_response_tau({1e-15, kPowers.pc}, p);
  CHECK(sol.error >= 0.999);
}

TEST_CASE("utility reduces to the pure reward when interference is free") {
  NetworkParams p;
  p.phi_c = 0.0;
  p.lambda_d = 1e-300;
  p.lambda_b = 1e-300;
  p.noise_rx = 0.0;
  CHECK(utility(kPowers, p, 1e-6) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("constraint residuals behave at the extremes") {
  NetworkParams p;
  // Without D2D interferers the QoS constraint has maximal slack.
  NetworkParams no_d2d = p;
  no_d2d.lambda_d = 1e-300;
  const XiValues slack = xi(kPowers, no_d2d, 1e-6);
  CHECK(slack.xi2 < 0.0);
  CHECK(slack.xi2 == doctest::Approx(-p.eps_qos * ergodic_rate(kPowers, no_d2d, false))
                         .epsilon(1e-6));

  // Strong D2D signal with the weakest cover violates covertness.
  const XiValues hot = xi({p.pd_max, p.pc_min}, p, 1e-6);
  CHECK(hot.xi1 > 0.0);
  CHECK(!hot.feasible());
}

TEST_CASE("surrogate models are first-order consistent") {
  const Vec2 center{0.3, -0.7};
  const std::array<double, 3> values{1.0, -0.5, 0.25};
  const std::array<Vec2, 3> grads{Vec2{2.0, -1.0}, Vec2{0.5, 0.0}, Vec2{-1.0, 3.0}};
  const auto models = surrogate(center, values, grads, 0.7);
  for (int i = 0; i < 3; ++i) {
    CHECK(models[i].eval(center) == values[i]);
    // Central difference of the model reproduces the gradient.
    const double h = 1e-6;
    Vec2 xp = center, xm = center;
    xp[0] += h;
    xm[0] -= h;
    CHECK((models[i].eval(xp) - models[i].eval(xm)) / (2 * h) ==
          doctest::Approx(grads[i][0]).epsilon(1e-6));
  }
  CHECK_THROWS(surrogate(center, values, grads, 0.0));
}

TEST_CASE("huge prox weight recovers the pure linearization") {
  const Vec2 center{0.0, 0.0};
  const auto models =
      surrogate(center, {1.0, 0.0, 0.0}, {Vec2{2.0, -3.0}, Vec2{}, Vec2{}}, 1e12);
  const Vec2 q{0.5, 0.5};
  CHECK(models[0].eval(q) == doctest::Approx(1.0 + 2.0 * 0.5 - 3.0 * 0.5).epsilon(1e-9));
}

TEST_CASE("unconstrained surrogate minimum is the prox-gradient step") {
  const Box2 box{{-10.0, -10.0}, {10.0, 10.0}};
  const Vec2 center{1.0, -2.0};
  const Vec2 g{0.5, -0.25};
  const double delta = 2.0;
  // Inactive constraints: models 1 and 2 deeply negative everywhere nearby.
  const auto models =
      surrogate(center, {3.0, -100.0, -100.0}, {g, Vec2{}, Vec2{}}, delta);
  const SurrogateSolution sol = solve_surrogate(models, box);
  CHECK(sol.feasible);
  CHECK(sol.point[0] == doctest::Approx(center[0] - delta * g[0]).epsilon(1e-6));
  CHECK(sol.point[1] == doctest::Approx(center[1] - delta * g[1]).epsilon(1e-6));

  // Zero gradients return the center.
  const auto flat = surrogate(center, {3.0, -1.0, -1.0}, {Vec2{}, Vec2{}, Vec2{}}, delta);
  const SurrogateSolution stay = solve_surrogate(flat, box);
  CHECK(stay.point[0] == doctest::Approx(center[0]).epsilon(1e-7));
  CHECK(stay.point[1] == doctest::Approx(center[1]).epsilon(1e-7));
}

TEST_CASE("surrogate solver matches a brute-force grid oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const Box2 box{{-1.0, -1.0}, {1.0, 1.0}};
  for (int instance = 0; instance < 5; ++instance) {
    const Vec2 center{0.5 * unif(rng), 0.5 * unif(rng)};
    const std::array<double, 3> values{unif(rng), unif(rng), unif(rng)};
    const std::array<Vec2, 3> grads{Vec2{unif(rng), unif(rng)},
                                    Vec2{unif(rng), unif(rng)},
                                    Vec2{unif(rng), unif(rng)}};
    const double delta = 0.5 + 0.5 * std::fabs(unif(rng));
    const auto models = surrogate(center, values, grads, delta);
    const SurrogateSolution sol = solve_surrogate(models, box);

    const int n = 2048;
    Vec2 best{};
    double best_obj = 1e300;
    bool any_feasible = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Vec2 q{box.lo[0] + 2.0 * i / (n - 1), box.lo[1] + 2.0 * j / (n - 1)};
        const bool feas = models[1].eval(q) <= 0.0 && models[2].eval(q) <= 0.0;
        if (feas && !any_feasible) {
          any_feasible = true;
          best_obj = 1e300;
        }
        if (any_feasible && !feas) continue;
        const double obj = any_feasible
                               ? models[0].eval(q)
                               : std::max(0.0, models[1].eval(q)) +
                                     std::max(0.0, models[2].eval(q));
        if (obj < best_obj) {
          best_obj = obj;
          best = q;
        }
      }
    }
    const double spacing = 2.0 / (n - 1);
    CHECK(sol.feasible == any_feasible);
    CHECK(std::fabs(sol.point[0] - best[0]) <= 2.0 * spacing);
    CHECK(std::fabs(sol.point[1] - best[1]) <= 2.0 * spacing);
  }
}

TEST_CASE("cost-free reward pushes the leader to maximum D2D power") {
  // With no interference price and vacuous constraints, the objective is
  // monotone in pd, so the iterates must reach the box ceiling.
  NetworkParams p;
  p.phi_c = 0.0;
  p.eps_covert = 0.9999;  // covertness constraint vacuous
  p.eps_qos = 0.9999;     // QoS constraint vacuous
  SolverOptions opt;
  opt.max_iters = 80;
  const EquilibriumResult res = run_algorithm1({0.01, 1.0}, p, opt);
  CHECK(res.powers.pd == doctest::Approx(p.pd_max).epsilon(1e-2));
  CHECK(res.feasible);
  CHECK_THROWS(run_algorithm1({1e9, 1.0}, p, opt));
}
