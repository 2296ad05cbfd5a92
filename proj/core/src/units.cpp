#include "covertnet/units.hpp"

#include <numbers>

namespace covertnet {

double db_to_linear(double value, DbRef ref) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("db_to_linear: non-finite input");
  }
  const double ratio = std::pow(10.0, value / 10.0);
  switch (ref) {
    case DbRef::dBm:
      return ratio * 1e-3;
    case DbRef::dBW:
    case DbRef::dB:
      return ratio;
  }
  throw std::invalid_argument("db_to_linear: bad reference");
}

double linear_to_db(double value, DbRef ref) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument("linear_to_db: input must be finite and positive");
  }
  switch (ref) {
    case DbRef::dBm:
      return 10.0 * std::log10(value / 1e-3);
    case DbRef::dBW:
    case DbRef::dB:
      return 10.0 * std::log10(value);
  }
  throw std::invalid_argument("linear_to_db: bad reference");
}

double sinc(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::invalid_argument("sinc: argument must lie in (0,1)");
  }
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace covertnet
