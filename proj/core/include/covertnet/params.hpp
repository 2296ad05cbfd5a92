#pragma once

#include <string>
#include <vector>

namespace covertnet {

// All fields are in linear units: powers in watts, densities per unit area,
// distances dimensionless.  Defaults reproduce the reference operating point
// (densities 0.1/0.01/0.1/0.01, ALOHA 0.3/0.7, alpha 4, R 1, -90 dBm noise,
// theta_D -10 dB, power boxes [0,20] dBm and [-10,10] dBW).
struct NetworkParams {
  double lambda_d = 0.1;    // density of D2D transmitters
  double lambda_b = 0.01;   // density of BSs
  double lambda_u = 0.1;    // density of CUs
  double lambda_a = 0.01;   // density of adversaries
  double p_active_d = 0.3;  // D2D ALOHA activation probability
  double p_active_c = 0.7;  // BS ALOHA activation probability
  double alpha = 4.0;       // path-loss exponent, > 2
  double link_dist = 1.0;   // D2D pair separation R
  double noise_rx = 1e-12;  // noise at D2D receiver, watts
  double noise_u = 1e-12;   // noise at CU, watts
  double noise_a = 1e-12;   // noise at adversary, watts
  double theta_d = 0.1;     // SINR decoding threshold at D2D receiver, linear
  double eps_covert = 0.01;  // detection-error tolerance
  double eps_qos = 0.05;     // cellular rate-loss tolerance
  double phi_d = 10.0;       // reward weight for D2D reliability
  double phi_c = 0.05;       // price per watt of interference at a CU
  double pd_min = 1e-3;      // 0 dBm
  double pd_max = 0.1;       // 20 dBm
  double pc_min = 0.1;       // -10 dBW
  double pc_max = 10.0;      // 10 dBW
};

struct PowerPair {
  double pd = 0.0;  // D2D transmission power, watts
  double pc = 0.0;  // cellular transmission power, watts
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Checks every NetworkParams invariant.  Each violation is reported with the
// field name and the bound it broke; params are never modified.
ValidationReport validate(const NetworkParams& params);

// Throws std::invalid_argument listing all violations if validation fails.
const NetworkParams& validated(const NetworkParams& params);

bool in_power_box(const NetworkParams& params, const PowerPair& powers);

}  // namespace covertnet
