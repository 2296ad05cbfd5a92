#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covertnet/montecarlo.hpp"
#include "covertnet/stable.hpp"
#include "covertnet/units.hpp"

using namespace covertnet;

TEST_CASE("interference Laplace transform boundary cases") {
  CHECK(interference_laplace(0.0, 0.1, 0.3, 0.0316, 4.0) == 1.0);
  CHECK(interference_laplace(1.0, 0.0, 0.3, 0.0316, 4.0) == 1.0);
  CHECK_THROWS(interference_laplace(-1.0, 0.1, 0.3, 0.0316, 4.0));
}

TEST_CASE("interference Laplace transform closed-form value") {
  // exp(-pi * 0.1 * 0.3 * sqrt(0.0316) / sinc(1/2)), sinc(1/2) = 2/pi.
  const double expected =
      std::exp(-std::numbers::pi * 0.03 * std::sqrt(0.0316) / (2.0 / std::numbers::pi));
  CHECK(expected == doctest::Approx(0.9740).epsilon(2e-4));
  CHECK(interference_laplace(1.0, 0.1, 0.3, 0.0316, 4.0) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("empirical Laplace transform agrees with the analytic product") {
  const NetworkParams p;  // reference defaults
  const PowerPair powers{db_to_linear(15.0, DbRef::dBm), db_to_linear(20.0, DbRef::dBm)};
  SimConfig sim;
  sim.n_trials = 20000;
  sim.seed = 42;
  const double s = 1000.0;  // resolve the transform away from 1
  const double analytic =
      interference_laplace(s, p.lambda_d, p.p_active_d, powers.pd, p.alpha) *
      interference_laplace(s, p.lambda_b, p.p_active_c, powers.pc, p.alpha);
  const Estimate est = estimate_interference_laplace(powers, s, p, sim);
  CHECK(std::fabs(analytic - est.mean) <= 3.0 * est.std_error);
}

TEST_CASE("interference CDF boundary cases") {
  const StableScale scale{1.0, 4.0};
  CHECK(interference_cdf(1.0, StableScale{0.0, 4.0}) == 1.0);
  CHECK(interference_cdf(0.0, scale) == 0.0);
  CHECK_THROWS(interference_cdf(-1.0, scale));
  CHECK_THROWS((void)interference_cdf(1.0, StableScale{-1.0, 4.0}));
  CHECK_THROWS((void)interference_cdf(1.0, StableScale{1.0, 2.0}));
}

TEST_CASE("alpha=4 closed form is the Levy law") {
  // iota = 1, t = 1 -> erfc(1/2).
  CHECK(interference_cdf(1.0, StableScale{1.0, 4.0}) ==
        doctest::Approx(std::erfc(0.5)).epsilon(1e-14));
  CHECK(std::erfc(0.5) == doctest::Approx(0.479500).epsilon(1e-6));
}

TEST_CASE("oscillatory inverse-Laplace path reproduces the Levy closed form") {
  const StableScale scale{1.0, 4.0};
  for (double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double series = interference_cdf_bromwich(t, scale);
    const double closed = std::erfc(scale.iota / (2.0 * std::sqrt(t)));
    CHECK(std::fabs(series - closed) <= 1e-6);
  }
}

TEST_CASE("CDF is monotone in t, decreasing in iota, and maps into [0,1]") {
  for (double alpha : {3.0, 4.0, 5.5}) {
    const StableScale scale{0.7, alpha};
    double prev = 0.0;
    for (double t = 1e-3; t < 1e4; t *= 3.0) {
      const double f = interference_cdf(t, scale);
      CHECK(f >= prev - 1e-9);
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
      prev = f;
    }
    // Larger iota means stochastically larger interference.
    CHECK(interference_cdf(1.0, StableScale{0.3, alpha}) >=
          interference_cdf(1.0, StableScale{0.9, alpha}));
  }
}

TEST_CASE("quantile inverts the CDF") {
  for (double alpha : {3.0, 4.0}) {
    const StableScale scale{0.5, alpha};
    for (double p : {0.1, 0.5, 0.9}) {
      const double q = interference_quantile(p, scale);
      CHECK(interference_cdf(q, scale) == doctest::Approx(p).epsilon(1e-6));
    }
  }
  CHECK(interference_quantile(0.5, StableScale{0.0, 4.0}) == 0.0);
  CHECK_THROWS(interference_quantile(0.0, StableScale{1.0, 4.0}));
  CHECK_THROWS(interference_quantile(1.0, StableScale{1.0, 4.0}));
}

TEST_CASE("empirical interference CDF matches the stable law") {
  // Duality check: P[I <= t] from simulation vs the inverse-Laplace CDF.
  const NetworkParams p;
  const PowerPair powers{db_to_linear(15.0, DbRef::dBm), db_to_linear(20.0, DbRef::dBm)};
  const StableScale scale = adversary_scale(p, powers);
  const double median = interference_quantile(0.5, scale);

  SimConfig sim;
  sim.n_trials = 20000;
  sim.seed = 7;
  // Estimate P[I <= median] via the Laplace-domain-free counter: reuse the
  // censored-mean accumulator by thresholding through estimate_fa_md with the
  // threshold placed at noise + median (FA = P[I > tau - noise]).
  NetworkParams quiet = p;
  const auto fa_md = estimate_fa_md(powers, {p.noise_a + median}, quiet, sim);
  const double empirical_cdf = 1.0 - fa_md.front().fa.mean;
  CHECK(std::fabs(empirical_cdf - 0.5) <= 3.0 * fa_md.front().fa.std_error + 0.01);
}
