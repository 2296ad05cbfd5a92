#pragma once

#include <cmath>

namespace covertnet {

// Golden-section search for the minimum of a unimodal function on [a, b].
// Returns the midpoint of the final bracket.
template <typename F>
double golden_section_min(const F& f, double a, double b, double abs_tol,
                          int max_iters = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iters && (b - a) > abs_tol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace covertnet
