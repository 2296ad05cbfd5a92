#include "covertnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "covertnet/units.hpp"

namespace covertnet {
namespace {

constexpr double kPi = std::numbers::pi;

// Radius beyond which the Rayleigh weight 2*pi*lambda*r*exp(-pi*lambda*r^2)
// is negligible.
double rayleigh_cutoff(double lambda) {
  return std::sqrt(43.0 / (kPi * lambda));
}

}  // namespace

double fa_probability(const PowerPair& powers, double tau, const NetworkParams& params,
                      const QuadratureSettings& quad) {
  if (!std::isfinite(tau)) throw std::invalid_argument("fa_probability: tau must be finite");
  if (tau <= params.noise_a) return 1.0;
  const StableScale scale = adversary_scale(params, powers);
  return 1.0 - interference_cdf(tau - params.noise_a, scale, quad);
}

double signal_pdf_at_adversary(double t, double pd, const NetworkParams& params,
                               const QuadratureSettings& quad) {
  if (t < 0.0) throw std::invalid_argument("signal_pdf_at_adversary: t must be >= 0");
  const double alpha = params.alpha;
  const double la = params.lambda_a;
  const auto integrand = [&](double r) {
    const double ra = std::pow(r, alpha);
    return std::exp(-t * ra / pd) * (ra / pd) * 2.0 * kPi * la * r *
           std::exp(-kPi * la * r * r);
  };
  // For large t the integrand is a spike of width ~(pd/t)^(1/alpha) near the
  // origin that a single adaptive pass over the full range samples right past.
  // Panel the range geometrically from that e-folding radius outward so every
  // panel is resolved.
  const double cutoff = rayleigh_cutoff(la);
  const double r_fold = t > 0.0 ? std::pow(pd / t, 1.0 / alpha) : cutoff;
  double right = std::min(r_fold, cutoff);
  double result = integrate(integrand, 0.0, right, quad);
  while (right < cutoff) {
    const double next = std::min(2.0 * right, cutoff);
    result += integrate(integrand, right, next, quad);
    right = next;
  }
  return result;
}

double md_probability(const PowerPair& powers, double tau, const NetworkParams& params,
                      const QuadratureSettings& quad) {
  if (!std::isfinite(tau)) throw std::invalid_argument("md_probability: tau must be finite");
  const double delta = tau - params.noise_a;
  if (delta <= 0.0) return 0.0;
  const StableScale scale = adversary_scale(params, powers);
  const auto integrand = [&](double t) {
    return signal_pdf_at_adversary(t, powers.pd, params, quad) *
           interference_cdf(delta - t, scale, quad);
  };
  // The signal density concentrates many decades below a large threshold, so
  // the range is split geometrically toward zero before adapting.  The
  // density is monotone decreasing, so pdf(0) * lo bounds the remainder.
  const double pdf_at_zero = signal_pdf_at_adversary(0.0, powers.pd, params, quad);
  double result = 0.0;
  double hi = delta;
  for (int k = 0; k < 60 && hi > 0.0; ++k) {
    double lo = hi / 8.0;
    if (lo * pdf_at_zero < quad.abs_tol * quad.tail_cutoff || lo < 1e-300) lo = 0.0;
    result += integrate(integrand, lo, hi, quad);
    hi = lo;
  }
  return std::min(1.0, std::max(0.0, result));
}

double d2d_success_probability(const PowerPair& powers, const NetworkParams& params) {
  const double alpha = params.alpha;
  const double e = 2.0 / alpha;
  const double R = params.link_dist;
  const double noise_term =
      std::exp(-params.theta_d * std::pow(R, alpha) * params.noise_rx / powers.pd);
  const double mix = params.lambda_d * params.p_active_d +
                     params.lambda_b * params.p_active_c * std::pow(powers.pc / powers.pd, e);
  const double interference_term =
      std::exp(-kPi * std::pow(params.theta_d, e) * R * R / sinc(e) * mix);
  return noise_term * interference_term;
}

double interference_tail_integral(double theta, double alpha, const QuadratureSettings& quad) {
  if (!(theta > 0.0)) throw std::invalid_argument("interference_tail_integral: theta must be > 0");
  if (alpha == 4.0) {
    return 0.5 * std::atan(std::sqrt(theta));
  }
  // Substituting x = 1/u turns the tail into a finite integral.
  const auto integrand = [&](double x) {
    return std::pow(x, alpha - 3.0) / (1.0 + std::pow(x, alpha));
  };
  return integrate(integrand, 0.0, std::pow(theta, 1.0 / alpha), quad);
}

namespace {

double cu_success(const PowerPair& powers, double theta_c, const NetworkParams& p,
                  bool include_d2d, const QuadratureSettings& quad) {
  if (!(theta_c > 0.0)) throw std::invalid_argument("cu_success: theta_c must be > 0");
  const double alpha = p.alpha;
  const double e = 2.0 / alpha;
  const double tail = interference_tail_integral(theta_c, alpha, quad);
  const double d2d_coeff =
      include_d2d
          ? kPi * p.lambda_d * p.p_active_d * std::pow(theta_c * powers.pd / powers.pc, e) / sinc(e)
          : 0.0;
  const double bs_coeff = 2.0 * kPi * p.lambda_b * p.p_active_c * std::pow(theta_c, e) * tail;
  const auto integrand = [&](double r) {
    const double r2 = r * r;
    const double exponent = -theta_c * std::pow(r, alpha) * p.noise_u / powers.pc -
                            (d2d_coeff + bs_coeff) * r2 - kPi * p.lambda_b * r2;
    return 2.0 * kPi * p.lambda_b * r * std::exp(exponent);
  };
  const double v = integrate(integrand, 0.0, rayleigh_cutoff(p.lambda_b), quad);
  return std::min(1.0, std::max(0.0, v));
}

}  // namespace

double cu_success_with_d2d(const PowerPair& powers, double theta_c, const NetworkParams& params,
                           const QuadratureSettings& quad) {
  return cu_success(powers, theta_c, params, true, quad);
}

double cu_success_without_d2d(const PowerPair& powers, double theta_c,
                              const NetworkParams& params, const QuadratureSettings& quad) {
  return cu_success(powers, theta_c, params, false, quad);
}

double ergodic_rate(const PowerPair& powers, const NetworkParams& params, bool include_d2d,
                    const QuadratureSettings& quad) {
  // The inner success probability must be resolved well below the outer
  // tolerance, otherwise its evaluation noise dominates the outer estimate.
  QuadratureSettings inner = quad;
  inner.abs_tol *= 1e-2;
  inner.rel_tol *= 1e-2;
  const auto success_at_rate = [&](double rate) {
    const double theta = std::pow(2.0, rate) - 1.0;
    if (theta <= 0.0) return 1.0;
    return cu_success(powers, theta, params, include_d2d, inner);
  };
  // Truncate where the tail probability no longer contributes.
  double r_max = 1.0;
  int doublings = 0;
  while (success_at_rate(r_max) > 1e-8 && doublings++ < 40) r_max *= 2.0;
  return integrate(success_at_rate, 0.0, r_max, quad);
}

double mean_d2d_interference(const PowerPair& powers, const NetworkParams& params,
                             double t_max, const QuadratureSettings& quad) {
  if (!(t_max > 0.0)) throw std::invalid_argument("mean_d2d_interference: t_max must be > 0");
  const StableScale scale = d2d_scale_at_cu(params, powers.pd);
  if (scale.iota == 0.0) return 0.0;
  // t = u^2 removes the sqrt-type behavior of the survival function near 0.
  const auto integrand = [&](double u) {
    return 2.0 * u * (1.0 - interference_cdf(u * u, scale, quad));
  };
  return integrate(integrand, 0.0, std::sqrt(t_max), quad);
}

}  // namespace covertnet
