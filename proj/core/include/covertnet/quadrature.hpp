#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace covertnet {

struct QuadratureSettings {
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  int max_subdivisions = 2000;
  // Segments of a semi-infinite integral are dropped once their magnitude
  // falls below tail_cutoff * abs_tol.
  double tail_cutoff = 0.01;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes/weights on [-1,1].
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kGk15Nodes[i]);
    fv[14 - i] = f(c + h * kGk15Nodes[i]);
  }
  fv[7] = f(c);
  double kronrod = kGk15Weights[7] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kronrod += kGk15Weights[i] * (fv[i] + fv[14 - i]);
  }
  double gauss = kG7Weights[3] * fv[7];
  for (int i = 0; i < 3; ++i) {
    gauss += kG7Weights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  }
  result = kronrod * h;
  err = std::abs((kronrod - gauss) * h);
}

template <typename F>
double integrate_impl(const F& f, double a, double b, double abs_tol, double rel_tol,
                      int& budget) {
  double result, err;
  gk15(f, a, b, result, err);
  if (err <= abs_tol || err <= rel_tol * std::abs(result) || budget <= 0) {
    return result;
  }
  --budget;
  const double mid = 0.5 * (a + b);
  const double half_tol = 0.5 * abs_tol;
  return integrate_impl(f, a, mid, half_tol, rel_tol, budget) +
         integrate_impl(f, mid, b, half_tol, rel_tol, budget);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval.
template <typename F>
double integrate(const F& f, double a, double b, const QuadratureSettings& q = {}) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("integrate: bounds must be finite");
  }
  if (a == b) return 0.0;
  int budget = q.max_subdivisions;
  return detail::integrate_impl(f, a, b, q.abs_tol, q.rel_tol, budget);
}

// Integral over [a, inf) of a decaying integrand: panels of doubling width
// until a panel contributes less than the tail cutoff.
template <typename F>
double integrate_to_infinity(const F& f, double a, double initial_width,
                             const QuadratureSettings& q = {}) {
  if (!(initial_width > 0.0)) {
    throw std::invalid_argument("integrate_to_infinity: width must be positive");
  }
  double total = 0.0;
  double left = a;
  double width = initial_width;
  const double cut = q.abs_tol * q.tail_cutoff;
  for (int panel = 0; panel < 200; ++panel) {
    const double piece = integrate(f, left, left + width, q);
    total += piece;
    left += width;
    width *= 2.0;
    if (std::abs(piece) < cut && panel >= 2) break;
  }
  return total;
}

}  // namespace covertnet
