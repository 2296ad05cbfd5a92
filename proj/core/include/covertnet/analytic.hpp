#pragma once

#include "covertnet/params.hpp"
#include "covertnet/quadrature.hpp"
#include "covertnet/stable.hpp"

namespace covertnet {

// Probability that the idle-transmitter observation at the typical adversary
// exceeds the detection threshold tau (false alarm).
double fa_probability(const PowerPair& powers, double tau, const NetworkParams& params,
                      const QuadratureSettings& quad = {});

// Density at t of the faded signal received from the typical D2D transmitter
// at its nearest adversary (Rayleigh-distributed distance).
double signal_pdf_at_adversary(double t, double pd, const NetworkParams& params,
                               const QuadratureSettings& quad = {});

// Probability that the active-transmitter observation falls below tau
// (miss detection).
double md_probability(const PowerPair& powers, double tau, const NetworkParams& params,
                      const QuadratureSettings& quad = {});

// Successful decoding probability of the typical D2D link (closed form).
double d2d_success_probability(const PowerPair& powers, const NetworkParams& params);

// Successful decoding probability at the typical CU, with and without the
// interference from the D2D network.
double cu_success_with_d2d(const PowerPair& powers, double theta_c,
                           const NetworkParams& params,
                           const QuadratureSettings& quad = {});
double cu_success_without_d2d(const PowerPair& powers, double theta_c,
                              const NetworkParams& params,
                              const QuadratureSettings& quad = {});

// Ergodic rate of the typical CU in bits per channel use.
double ergodic_rate(const PowerPair& powers, const NetworkParams& params, bool include_d2d,
                    const QuadratureSettings& quad = {});

// Truncated mean of the D2D interference at the typical CU: the untruncated
// stable-law mean is infinite, so the truncation level is part of the
// contract.
double mean_d2d_interference(const PowerPair& powers, const NetworkParams& params,
                             double t_max, const QuadratureSettings& quad = {});

// Tail integral of u/(1+u^alpha) from theta^(-1/alpha); closed form at
// alpha == 4.
double interference_tail_integral(double theta, double alpha,
                                  const QuadratureSettings& quad = {});

}  // namespace covertnet
