#include "covertnet/stable.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "covertnet/units.hpp"

namespace covertnet {
namespace {

constexpr double kPi = std::numbers::pi;

void check_scale(const StableScale& scale) {
  if (scale.iota < 0.0) throw std::invalid_argument("StableScale: iota must be >= 0");
  if (!(scale.alpha > 2.0)) throw std::invalid_argument("StableScale: alpha must exceed 2");
}

// Euler transformation of the alternating partial-sum tail: repeated
// pairwise averaging of the trailing partial sums.
double accelerate(const std::vector<double>& partial_sums) {
  const size_t n = partial_sums.size();
  const size_t m = std::min<size_t>(n, 12);
  std::vector<double> row(partial_sums.end() - static_cast<long>(m), partial_sums.end());
  while (row.size() > 1) {
    for (size_t i = 0; i + 1 < row.size(); ++i) {
      row[i] = 0.5 * (row[i] + row[i + 1]);
    }
    row.pop_back();
  }
  return row.front();
}

}  // namespace

StableScale adversary_scale(const NetworkParams& p, const PowerPair& powers) {
  const double e = 2.0 / p.alpha;
  const double iota = kPi / sinc(e) *
                      (p.lambda_b * p.p_active_c * std::pow(powers.pc, e) +
                       p.lambda_d * p.p_active_d * std::pow(powers.pd, e));
  return {iota, p.alpha};
}

StableScale d2d_scale_at_cu(const NetworkParams& p, double pd) {
  const double e = 2.0 / p.alpha;
  return {kPi * p.lambda_d * p.p_active_d * std::pow(pd, e) / sinc(e), p.alpha};
}

double interference_laplace(double s, double density, double activation, double power,
                            double alpha) {
  if (s < 0.0) throw std::invalid_argument("interference_laplace: s must be >= 0");
  if (s == 0.0 || density == 0.0) return 1.0;
  const double e = 2.0 / alpha;
  return std::exp(-kPi * density * activation * std::pow(s * power, e) / sinc(e));
}

double interference_cdf_bromwich(double t, const StableScale& scale,
                                 const QuadratureSettings& quad) {
  check_scale(scale);
  if (t < 0.0) throw std::invalid_argument("interference_cdf: t must be >= 0");
  if (scale.iota == 0.0) return 1.0;
  if (t == 0.0) return 0.0;

  const double alpha = scale.alpha;
  const double iota = scale.iota;
  const double phase = 2.0 * kPi / alpha;
  const double b = iota * std::sin(phase);  // > 0 for alpha > 2
  const double c = iota * std::cos(phase);
  const double half_alpha = 0.5 * alpha;
  const double prefactor = alpha / (2.0 * kPi);

  // Substituted integrand, regular at w -> 0.
  const auto f = [&](double w) {
    const double arg = b * w;
    const double env = std::exp(-c * w - t * std::pow(w, half_alpha));
    if (w < 1e-300) return prefactor * env * b;
    return prefactor * env * std::sin(arg) / w;
  };

  // Integrate between consecutive zeros of the sine factor; the terms
  // alternate in sign, so the truncated tail is bounded by the last term and
  // can be tightened by averaging the trailing partial sums.
  QuadratureSettings inner = quad;
  inner.abs_tol = quad.abs_tol * 1e-2;
  if (c < 0.0) {
    // For alpha < 4 the envelope grows to exp(g*) before the t-term wins, and
    // the alternating intervals cancel.  A Chernoff bound on the left tail
    // gives -ln F(t) >= g*, so once g* is large the CDF is zero to well below
    // the quadrature tolerance; otherwise tighten the per-interval relative
    // tolerance so the cancellation does not amplify quadrature error.
    const double h = half_alpha;
    const double w_peak = std::pow(-c / (t * h), 1.0 / (h - 1.0));
    const double g_peak = -c * w_peak * (1.0 - 1.0 / h);
    if (g_peak > 25.0) return 0.0;
    inner.rel_tol = std::min(inner.rel_tol, 1e-13);
  }
  const double period = kPi / b;
  const double cut = quad.abs_tol * quad.tail_cutoff;

  double sum = 0.0;
  std::vector<double> partials;
  partials.reserve(64);
  int consecutive_small = 0;
  bool tail_converged = false;
  const int max_intervals = 200000;
  // For large t the envelope confines the mass to w <~ t^(-2/alpha), which
  // can be far narrower than the first sine half-period; panel that interval
  // geometrically from the envelope scale so the spike is never stepped over.
  const auto first_interval = [&]() {
    const double w_env = std::pow(t, -2.0 / alpha);
    double right = std::min(w_env, period);
    double acc = integrate(f, 0.0, right, inner);
    while (right < period) {
      const double next = std::min(2.0 * right, period);
      acc += integrate(f, right, next, inner);
      right = next;
    }
    return acc;
  };
  for (int k = 0; k < max_intervals; ++k) {
    const double term =
        k == 0 ? first_interval() : integrate(f, k * period, (k + 1) * period, inner);
    sum += term;
    partials.push_back(sum);
    if (std::abs(term) < cut) {
      if (++consecutive_small >= 2 && k >= 3) {
        tail_converged = true;
        break;
      }
    } else {
      consecutive_small = 0;
    }
  }
  // Acceleration of the trailing partial sums is only worthwhile when the raw
  // series had to be truncated; once the terms themselves are below the
  // cutoff, the plain sum is already tighter than the averaged one.
  const double integral =
      (!tail_converged && partials.size() >= 4) ? accelerate(partials) : sum;
  const double cdf = 1.0 - integral;
  return std::min(1.0, std::max(0.0, cdf));
}

double interference_cdf(double t, const StableScale& scale, const QuadratureSettings& quad) {
  check_scale(scale);
  if (t < 0.0) throw std::invalid_argument("interference_cdf: t must be >= 0");
  if (scale.iota == 0.0) return 1.0;
  if (t == 0.0) return 0.0;
  if (scale.alpha == 4.0) {
    // Laplace transform exp(-iota sqrt(s)) is the one-sided Levy law.
    return std::erfc(scale.iota / (2.0 * std::sqrt(t)));
  }
  return interference_cdf_bromwich(t, scale, quad);
}

double interference_quantile(double p, const StableScale& scale,
                             const QuadratureSettings& quad) {
  check_scale(scale);
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("interference_quantile: p must lie in (0,1)");
  }
  if (scale.iota == 0.0) return 0.0;

  // Natural scale of the law: F depends on t through t / iota^(alpha/2).
  double lo = 0.0;
  double hi = std::pow(scale.iota, 0.5 * scale.alpha);
  while (interference_cdf(hi, scale, quad) < p) {
    lo = hi;
    hi *= 4.0;
    if (hi > 1e300) throw std::runtime_error("interference_quantile: bracket overflow");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (interference_cdf(mid, scale, quad) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace covertnet
