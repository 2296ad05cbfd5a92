#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covertnet/game.hpp"
#include "covertnet/montecarlo.hpp"
#include "covertnet/params.hpp"
#include "covertnet/quadrature.hpp"

namespace covertnet {

// Flat key-value store with canonical, sorted keys.  Power and noise keys
// carry an explicit unit suffix (_dbm, _dbw, _watt), SINR thresholds _db or
// _linear; unknown keys are errors at resolve time.
using KeyValueMap = std::map<std::string, std::string>;

struct SweepSpec {
  std::string variable;
  std::vector<double> values;
  std::string target = "equilibrium";  // or "metrics"
  int workers = 0;
  std::vector<std::pair<std::string, std::string>> companions;
};

struct Config {
  NetworkParams params;
  PowerPair powers;       // evaluation operating point
  double theta_c = 1.0;   // linear SINR threshold at the CU
  double t_max = 0.0;     // interference truncation level, watts
  SimConfig sim;
  QuadratureSettings quad;
  SolverOptions solver;
  double validate_iota_scale = 1.0;  // test hook for the negative control
  int validate_tau_points = 7;
  std::optional<SweepSpec> sweep;
  KeyValueMap snapshot;  // resolved raw keys, reproduces the run exactly
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Default operating point as a raw key-value map.
KeyValueMap default_key_values();

// Parses `key = value` lines; '#' starts a comment.  Duplicate keys are
// errors.
KeyValueMap parse_config_file(const std::string& path);
KeyValueMap parse_config_text(const std::string& text, const std::string& origin = "<text>");

// Applies "key=value" override strings on top of a map.
void apply_overrides(KeyValueMap& kv, const std::vector<std::string>& overrides);

// Turns raw key-values (defaults filled in) into a validated Config.
// Throws ConfigError naming every offending key or parameter invariant.
Config resolve_config(const KeyValueMap& kv);

// FNV-1a over the sorted "key=value" lines of the snapshot.
std::string config_hash(const KeyValueMap& kv);

}  // namespace covertnet
