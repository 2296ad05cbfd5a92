#pragma once

#include "covertnet/params.hpp"
#include "covertnet/quadrature.hpp"

namespace covertnet {

// Scale of the one-sided stable law of the aggregate interference: the
// Laplace transform is exp(-iota * s^(2/alpha)).
struct StableScale {
  double iota = 0.0;
  double alpha = 4.0;
};

// Scale of the D2D-plus-cellular aggregate seen at the typical adversary.
StableScale adversary_scale(const NetworkParams& params, const PowerPair& powers);

// Scale of the D2D-only aggregate seen at the typical CU.
StableScale d2d_scale_at_cu(const NetworkParams& params, double pd);

// Laplace transform of the interference from one PPP population:
// exp(-pi * density * activation * (s*power)^(2/alpha) / sinc(2/alpha)).
double interference_laplace(double s, double density, double activation, double power,
                            double alpha);

// CDF of the aggregate interference at level t.  Dispatches to the erfc
// closed form at alpha == 4 (one-sided Levy law) and to the oscillatory
// inverse-Laplace integral otherwise.
double interference_cdf(double t, const StableScale& scale,
                        const QuadratureSettings& quad = {});

// General-alpha inverse-Laplace path, exposed so the alpha == 4 closed form
// can be cross-checked against it.
double interference_cdf_bromwich(double t, const StableScale& scale,
                                 const QuadratureSettings& quad = {});

// Inverse CDF by bisection; p in (0,1).
double interference_quantile(double p, const StableScale& scale,
                             const QuadratureSettings& quad = {});

}  // namespace covertnet
