#include "covertnet/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace covertnet {
namespace {

void check_positive(std::vector<std::string>& errs, const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    errs.push_back(std::string(name) + " must be positive and finite");
  }
}

void check_prob_open_closed(std::vector<std::string>& errs, const char* name, double v) {
  if (!(v > 0.0 && v <= 1.0)) {
    errs.push_back(std::string(name) + " must lie in (0,1]");
  }
}

void check_prob_open(std::vector<std::string>& errs, const char* name, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    errs.push_back(std::string(name) + " must lie in (0,1)");
  }
}

}  // namespace

ValidationReport validate(const NetworkParams& p) {
  ValidationReport rep;
  auto& errs = rep.errors;

  check_positive(errs, "lambda_d", p.lambda_d);
  check_positive(errs, "lambda_b", p.lambda_b);
  check_positive(errs, "lambda_u", p.lambda_u);
  check_positive(errs, "lambda_a", p.lambda_a);
  check_prob_open_closed(errs, "p_active_d", p.p_active_d);
  check_prob_open_closed(errs, "p_active_c", p.p_active_c);
  if (!(p.alpha > 2.0)) {
    errs.push_back("alpha must exceed 2");
  }
  check_positive(errs, "link_dist", p.link_dist);
  if (!(p.noise_rx >= 0.0)) errs.push_back("noise_rx must be >= 0");
  if (!(p.noise_u >= 0.0)) errs.push_back("noise_u must be >= 0");
  if (!(p.noise_a >= 0.0)) errs.push_back("noise_a must be >= 0");
  check_positive(errs, "theta_d", p.theta_d);
  check_prob_open(errs, "eps_covert", p.eps_covert);
  check_prob_open(errs, "eps_qos", p.eps_qos);
  if (!std::isfinite(p.phi_d)) errs.push_back("phi_d must be finite");
  if (!std::isfinite(p.phi_c)) errs.push_back("phi_c must be finite");

  check_positive(errs, "pd_min", p.pd_min);
  check_positive(errs, "pd_max", p.pd_max);
  check_positive(errs, "pc_min", p.pc_min);
  check_positive(errs, "pc_max", p.pc_max);
  if (p.pd_min > p.pd_max) errs.push_back("empty power box: pd_min > pd_max");
  if (p.pc_min > p.pc_max) errs.push_back("empty power box: pc_min > pc_max");

  if (p.lambda_u < p.lambda_b) {
    errs.push_back("lambda_u must be >= lambda_b");
  } else if (p.lambda_u < 10.0 * p.lambda_b) {
    rep.warnings.push_back("lambda_u below 10x lambda_b; the typical-CU model assumes lambda_u >> lambda_b");
  }
  return rep;
}

const NetworkParams& validated(const NetworkParams& params) {
  const ValidationReport rep = validate(params);
  if (!rep.ok()) {
    std::ostringstream oss;
    oss << "invalid NetworkParams:";
    for (const auto& e : rep.errors) oss << "\n  " << e;
    throw std::invalid_argument(oss.str());
  }
  return params;
}

bool in_power_box(const NetworkParams& p, const PowerPair& powers) {
  return powers.pd >= p.pd_min && powers.pd <= p.pd_max && powers.pc >= p.pc_min &&
         powers.pc <= p.pc_max;
}

}  // namespace covertnet
