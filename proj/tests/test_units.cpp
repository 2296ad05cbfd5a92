#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covertnet/quadrature.hpp"
#include "covertnet/units.hpp"

using namespace covertnet;

TEST_CASE("decibel conversions hit the reference points") {
  CHECK(db_to_linear(0.0, DbRef::dBm) == doctest::Approx(1.0e-3).epsilon(1e-12));
  CHECK(db_to_linear(-90.0, DbRef::dBm) == doctest::Approx(1.0e-12).epsilon(1e-12));
  CHECK(db_to_linear(10.0, DbRef::dBW) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(db_to_linear(-10.0, DbRef::dB) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(db_to_linear(15.0, DbRef::dBm) == doctest::Approx(0.0316227766).epsilon(1e-9));
}

TEST_CASE("decibel round trips are tight") {
  for (double v : {-90.0, -10.0, 0.0, 3.0, 15.0, 20.0, 40.0}) {
    for (DbRef ref : {DbRef::dBm, DbRef::dBW, DbRef::dB}) {
      CHECK(linear_to_db(db_to_linear(v, ref), ref) == doctest::Approx(v).epsilon(1e-12));
    }
  }
  CHECK_THROWS(linear_to_db(0.0, DbRef::dBW));
  CHECK_THROWS(linear_to_db(-1.0, DbRef::dBm));
  CHECK_THROWS(db_to_linear(std::nan(""), DbRef::dB));
}

TEST_CASE("sinc values and domain") {
  CHECK(sinc(0.5) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(sinc(2.0 / 3.0) ==
        doctest::Approx(std::sin(2.0 * std::numbers::pi / 3.0) /
                        (2.0 * std::numbers::pi / 3.0))
            .epsilon(1e-14));
  // sin(2pi/3)/(2pi/3) = (sqrt(3)/2)/(2pi/3)
  CHECK(sinc(2.0 / 3.0) == doctest::Approx(0.41349667).epsilon(1e-7));
  CHECK_THROWS(sinc(0.0));
  CHECK_THROWS(sinc(1.0));
  CHECK_THROWS(sinc(-0.5));
  CHECK_THROWS(sinc(1.5));
}

TEST_CASE("sinc is consistent with the interference moment integral") {
  // 2 * sinc(2/alpha) * integral_0^inf r/(1+r^alpha) dr = 1.
  const QuadratureSettings quad;
  for (double alpha : {3.0, 4.0, 5.0}) {
    const double integral = integrate_to_infinity(
        [&](double r) { return r / (1.0 + std::pow(r, alpha)); }, 0.0, 1.0, quad);
    CHECK(2.0 * sinc(2.0 / alpha) * integral == doctest::Approx(1.0).epsilon(1e-6));
  }
  // alpha = 4 closes in elementary form: integral_0^inf r/(1+r^4) dr = pi/4.
  const double i4 = integrate_to_infinity(
      [](double r) { return r / (1.0 + r * r * r * r); }, 0.0, 1.0, quad);
  CHECK(i4 == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-8));
}

TEST_CASE("adaptive quadrature reproduces known integrals") {
  const QuadratureSettings quad;
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, quad) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, quad) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
  CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, 1.0, quad) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS(integrate([](double x) { return x; }, 0.0,
                         std::numeric_limits<double>::infinity(), quad));
}

TEST_CASE("quadrature results are stable under tolerance halving") {
  QuadratureSettings quad;
  QuadratureSettings tight = quad;
  tight.abs_tol *= 0.5;
  tight.rel_tol *= 0.5;
  const auto f = [](double x) { return std::exp(-x) * std::cos(10.0 * x); };
  const double a = integrate(f, 0.0, 20.0, quad);
  const double b = integrate(f, 0.0, 20.0, tight);
  CHECK(std::fabs(a - b) <= quad.rel_tol * std::fabs(a) + quad.abs_tol);
}
