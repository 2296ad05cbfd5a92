#pragma once

#include <cmath>
#include <stdexcept>

namespace covertnet {

// Reference for decibel quantities: dBm and dBW convert to watts, dB to a
// plain linear ratio.
enum class DbRef { dBm, dBW, dB };

double db_to_linear(double value, DbRef ref);
double linear_to_db(double value, DbRef ref);

// Normalized sinc, sin(pi x)/(pi x), restricted to x in (0,1).  The
// interference expressions only ever need 2/alpha with alpha > 2.
double sinc(double x);

}  // namespace covertnet
