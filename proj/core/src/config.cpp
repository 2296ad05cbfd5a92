#include "covertnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "covertnet/units.hpp"

namespace covertnet {
namespace {

enum class KeyKind { Plain, Power, Ratio, Integer, Text };

struct KeySpec {
  const char* base;
  KeyKind kind;
};

// Every logical key the schema knows.  Power keys accept _dbm/_dbw/_watt
// suffixes, ratio keys _db/_linear.
constexpr KeySpec kKeys[] = {
    {"lambda_d", KeyKind::Plain},
    {"lambda_b", KeyKind::Plain},
    {"lambda_u", KeyKind::Plain},
    {"lambda_a", KeyKind::Plain},
    {"p_active_d", KeyKind::Plain},
    {"p_active_c", KeyKind::Plain},
    {"alpha", KeyKind::Plain},
    {"link_dist", KeyKind::Plain},
    {"noise_rx", KeyKind::Power},
    {"noise_u", KeyKind::Power},
    {"noise_a", KeyKind::Power},
    {"theta_d", KeyKind::Ratio},
    {"theta_c", KeyKind::Ratio},
    {"eps_covert", KeyKind::Plain},
    {"eps_qos", KeyKind::Plain},
    {"phi_d", KeyKind::Plain},
    {"phi_c", KeyKind::Plain},
    {"pd_min", KeyKind::Power},
    {"pd_max", KeyKind::Power},
    {"pc_min", KeyKind::Power},
    {"pc_max", KeyKind::Power},
    {"pd", KeyKind::Power},
    {"pc", KeyKind::Power},
    {"pd_fixed", KeyKind::Power},  // sets pd and collapses the pd box
    {"pc_fixed", KeyKind::Power},
    {"t_max", KeyKind::Power},
    {"sim.window_radius", KeyKind::Plain},
    {"sim.trials", KeyKind::Integer},
    {"sim.seed", KeyKind::Integer},
    {"sim.workers", KeyKind::Integer},
    {"sim.censor_at", KeyKind::Power},
    {"quad.abs_tol", KeyKind::Plain},
    {"quad.rel_tol", KeyKind::Plain},
    {"quad.max_subdivisions", KeyKind::Integer},
    {"sca.gamma", KeyKind::Plain},
    {"sca.delta", KeyKind::Plain},
    {"sca.tol", KeyKind::Plain},
    {"sca.constraint_tol", KeyKind::Plain},
    {"sca.max_iters", KeyKind::Integer},
    {"sca.fd_step", KeyKind::Plain},
    {"sca.grid_n", KeyKind::Integer},
    {"validate.iota_scale", KeyKind::Plain},
    {"validate.tau_points", KeyKind::Integer},
    {"sweep.variable", KeyKind::Text},
    {"sweep.values", KeyKind::Text},
    {"sweep.start", KeyKind::Plain},
    {"sweep.stop", KeyKind::Plain},
    {"sweep.count", KeyKind::Integer},
    {"sweep.spacing", KeyKind::Text},
    {"sweep.target", KeyKind::Text},
    {"sweep.workers", KeyKind::Integer},
    {"sweep.companions", KeyKind::Text},
};

struct LogicalKey {
  std::string base;
  KeyKind kind = KeyKind::Plain;
  DbRef unit = DbRef::dB;  // for Power/Ratio keys
  bool linear = false;     // _watt or _linear suffix
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::optional<LogicalKey> classify_key(const std::string& raw) {
  for (const auto& spec : kKeys) {
    const std::string base = spec.base;
    switch (spec.kind) {
      case KeyKind::Plain:
      case KeyKind::Integer:
      case KeyKind::Text:
        if (raw == base) return LogicalKey{base, spec.kind, DbRef::dB, true};
        break;
      case KeyKind::Power:
        if (raw == base + "_dbm") return LogicalKey{base, spec.kind, DbRef::dBm, false};
        if (raw == base + "_dbw") return LogicalKey{base, spec.kind, DbRef::dBW, false};
        if (raw == base + "_watt") return LogicalKey{base, spec.kind, DbRef::dBW, true};
        break;
      case KeyKind::Ratio:
        if (raw == base + "_db") return LogicalKey{base, spec.kind, DbRef::dB, false};
        if (raw == base + "_linear") return LogicalKey{base, spec.kind, DbRef::dB, true};
        break;
    }
  }
  return std::nullopt;
}

double parse_double(const std::string& key, const std::string& text,
                    std::vector<std::string>& errors) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    errors.push_back(key + ": not a number: '" + text + "'");
    return 0.0;
  }
  return v;
}

long parse_long(const std::string& key, const std::string& text,
                std::vector<std::string>& errors) {
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    errors.push_back(key + ": not an integer: '" + text + "'");
    return 0;
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream iss(s);
  while (std::getline(iss, piece, sep)) out.push_back(trim(piece));
  return out;
}

}  // namespace

KeyValueMap default_key_values() {
  return {
      {"lambda_d", "0.1"},       {"lambda_b", "0.01"},
      {"lambda_u", "0.1"},       {"lambda_a", "0.01"},
      {"p_active_d", "0.3"},     {"p_active_c", "0.7"},
      {"alpha", "4"},            {"link_dist", "1"},
      {"noise_rx_dbm", "-90"},   {"noise_u_dbm", "-90"},
      {"noise_a_dbm", "-90"},    {"theta_d_db", "-10"},
      {"theta_c_db", "0"},       {"eps_covert", "0.01"},
      {"eps_qos", "0.05"},       {"phi_d", "10"},
      {"phi_c", "0.05"},         {"pd_min_dbm", "0"},
      {"pd_max_dbm", "20"},      {"pc_min_dbw", "-10"},
      {"pc_max_dbw", "10"},      {"pd_dbm", "15"},
      {"pc_dbm", "20"},          {"t_max_watt", "0"},
      {"sim.window_radius", "100"}, {"sim.trials", "100000"},
      {"sim.seed", "1"},         {"sim.workers", "0"},
      {"quad.abs_tol", "1e-9"},  {"quad.rel_tol", "1e-7"},
      {"quad.max_subdivisions", "2000"},
      {"sca.gamma", "0.5"},      {"sca.delta", "0"},
      {"sca.tol", "1e-4"},       {"sca.constraint_tol", "1e-3"},
      {"sca.max_iters", "150"},   {"sca.fd_step", "1e-3"},
      {"sca.grid_n", "64"},      {"validate.iota_scale", "1"},
      {"validate.tau_points", "7"},
  };
}

KeyValueMap parse_config_text(const std::string& text, const std::string& origin) {
  KeyValueMap kv;
  std::istringstream iss(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string> errors;
  while (std::getline(iss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (kv.count(key)) {
      errors.push_back(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
      continue;
    }
    kv[key] = value;
  }
  if (!errors.empty()) {
    std::string msg = "config parse errors:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return kv;
}

KeyValueMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  return parse_config_text(oss.str(), path);
}

void apply_overrides(KeyValueMap& kv, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: '" + o + "'");
    kv[trim(o.substr(0, eq))] = trim(o.substr(eq + 1));
  }
}

Config resolve_config(const KeyValueMap& user_kv) {
  // Defaults first; user keys replace the matching logical key even if they
  // use a different unit suffix.
  KeyValueMap kv = default_key_values();
  std::vector<std::string> errors;
  for (const auto& [raw, value] : user_kv) {
    const auto logical = classify_key(raw);
    if (!logical) {
      errors.push_back("unknown key '" + raw + "'");
      continue;
    }
    // Drop any default expressed in another unit for the same logical key.
    for (auto it = kv.begin(); it != kv.end();) {
      const auto other = classify_key(it->first);
      if (other && other->base == logical->base && it->first != raw) {
        it = kv.erase(it);
      } else {
        ++it;
      }
    }
    kv[raw] = value;
  }

  std::map<std::string, double> numbers;
  std::map<std::string, long> integers;
  std::map<std::string, std::string> texts;
  for (const auto& [raw, value] : kv) {
    const auto logical = classify_key(raw);
    if (!logical) continue;  // already reported
    switch (logical->kind) {
      case KeyKind::Plain:
        numbers[logical->base] = parse_double(raw, value, errors);
        break;
      case KeyKind::Integer:
        integers[logical->base] = parse_long(raw, value, errors);
        break;
      case KeyKind::Text:
        texts[logical->base] = value;
        break;
      case KeyKind::Power:
      case KeyKind::Ratio: {
        const double v = parse_double(raw, value, errors);
        if (logical->linear) {
          numbers[logical->base] = v;
        } else {
          try {
            numbers[logical->base] = db_to_linear(v, logical->unit);
          } catch (const std::exception& e) {
            errors.push_back(raw + ": " + e.what());
          }
        }
        break;
      }
    }
  }
  if (!errors.empty()) {
    std::string msg = "config errors:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }

  Config cfg;
  cfg.snapshot = kv;
  auto num = [&](const char* k) { return numbers.at(k); };
  auto has_num = [&](const char* k) { return numbers.count(k) > 0; };
  auto integer = [&](const char* k) { return integers.at(k); };

  NetworkParams& p = cfg.params;
  p.lambda_d = num("lambda_d");
  p.lambda_b = num("lambda_b");
  p.lambda_u = num("lambda_u");
  p.lambda_a = num("lambda_a");
  p.p_active_d = num("p_active_d");
  p.p_active_c = num("p_active_c");
  p.alpha = num("alpha");
  p.link_dist = num("link_dist");
  p.noise_rx = num("noise_rx");
  p.noise_u = num("noise_u");
  p.noise_a = num("noise_a");
  p.theta_d = num("theta_d");
  p.eps_covert = num("eps_covert");
  p.eps_qos = num("eps_qos");
  p.phi_d = num("phi_d");
  p.phi_c = num("phi_c");
  p.pd_min = num("pd_min");
  p.pd_max = num("pd_max");
  p.pc_min = num("pc_min");
  p.pc_max = num("pc_max");
  cfg.powers.pd = num("pd");
  cfg.powers.pc = num("pc");
  if (has_num("pd_fixed")) {
    cfg.powers.pd = p.pd_min = p.pd_max = num("pd_fixed");
  }
  if (has_num("pc_fixed")) {
    cfg.powers.pc = p.pc_min = p.pc_max = num("pc_fixed");
  }
  cfg.theta_c = num("theta_c");
  cfg.t_max = num("t_max") > 0.0 ? num("t_max") : 1e6 * p.noise_u;

  cfg.sim.window_radius = num("sim.window_radius");
  cfg.sim.n_trials = integer("sim.trials");
  cfg.sim.seed = static_cast<std::uint64_t>(integer("sim.seed"));
  cfg.sim.workers = static_cast<int>(integer("sim.workers"));
  if (has_num("sim.censor_at")) cfg.sim.censor_at = num("sim.censor_at");

  cfg.quad.abs_tol = num("quad.abs_tol");
  cfg.quad.rel_tol = num("quad.rel_tol");
  cfg.quad.max_subdivisions = static_cast<int>(integer("quad.max_subdivisions"));

  cfg.solver.gamma = num("sca.gamma");
  cfg.solver.delta = num("sca.delta");
  cfg.solver.tol = num("sca.tol");
  cfg.solver.constraint_tol = num("sca.constraint_tol");
  cfg.solver.max_iters = static_cast<int>(integer("sca.max_iters"));
  cfg.solver.fd_step = num("sca.fd_step");
  cfg.solver.grid_n = static_cast<int>(integer("sca.grid_n"));
  cfg.solver.t_max = cfg.t_max;

  cfg.validate_iota_scale = num("validate.iota_scale");
  cfg.validate_tau_points = static_cast<int>(integer("validate.tau_points"));

  // Sweep block, if requested.
  if (texts.count("sweep.variable")) {
    SweepSpec spec;
    spec.variable = texts.at("sweep.variable");
    if (!classify_key(spec.variable)) {
      errors.push_back("sweep.variable names unknown parameter '" + spec.variable + "'");
    }
    if (texts.count("sweep.values")) {
      for (const auto& piece : split(texts.at("sweep.values"), ',')) {
        if (piece.empty()) continue;
        spec.values.push_back(parse_double("sweep.values", piece, errors));
      }
    } else if (has_num("sweep.start") && has_num("sweep.stop") && integers.count("sweep.count")) {
      const double start = num("sweep.start");
      const double stop = num("sweep.stop");
      const long count = integer("sweep.count");
      std::string spacing = texts.count("sweep.spacing") ? texts.at("sweep.spacing") : "linear";
      if (count < 1) {
        errors.push_back("sweep.count must be >= 1");
      } else if (spacing == "linear") {
        for (long i = 0; i < count; ++i) {
          spec.values.push_back(count == 1 ? start
                                           : start + (stop - start) * static_cast<double>(i) /
                                                 static_cast<double>(count - 1));
        }
      } else if (spacing == "log") {
        if (start <= 0.0 || stop <= 0.0) {
          errors.push_back("sweep.spacing=log requires positive start/stop");
        } else {
          for (long i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0
                                        : static_cast<double>(i) / static_cast<double>(count - 1);
            spec.values.push_back(start * std::pow(stop / start, f));
          }
        }
      } else if (spacing == "db") {
        if (start <= 0.0 || stop <= 0.0) {
          errors.push_back("sweep.spacing=db requires positive linear start/stop");
        } else {
          const double a = 10.0 * std::log10(start);
          const double b = 10.0 * std::log10(stop);
          for (long i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0
                                        : static_cast<double>(i) / static_cast<double>(count - 1);
            spec.values.push_back(std::pow(10.0, (a + (b - a) * f) / 10.0));
          }
        }
      } else {
        errors.push_back("sweep.spacing must be linear, log, or db");
      }
    } else {
      errors.push_back("sweep needs sweep.values or sweep.start/stop/count");
    }
    if (spec.values.empty()) {
      errors.push_back("sweep.values must be nonempty");
    } else {
      const bool increasing = std::is_sorted(spec.values.begin(), spec.values.end(),
                                             [](double a, double b) { return a <= b; });
      const bool decreasing = std::is_sorted(spec.values.begin(), spec.values.end(),
                                             [](double a, double b) { return a >= b; });
      if (!increasing && !decreasing) {
        errors.push_back("sweep.values must be strictly monotone");
      }
    }
    if (texts.count("sweep.target")) {
      spec.target = texts.at("sweep.target");
      if (spec.target != "equilibrium" && spec.target != "metrics") {
        errors.push_back("sweep.target must be equilibrium or metrics");
      }
    }
    if (integers.count("sweep.workers")) {
      spec.workers = static_cast<int>(integer("sweep.workers"));
    }
    if (texts.count("sweep.companions")) {
      for (const auto& piece : split(texts.at("sweep.companions"), ';')) {
        if (piece.empty()) continue;
        const auto eq = piece.find('=');
        if (eq == std::string::npos) {
          errors.push_back("sweep.companions entries must be key=value");
          continue;
        }
        spec.companions.emplace_back(trim(piece.substr(0, eq)), trim(piece.substr(eq + 1)));
      }
    }
    cfg.sweep = std::move(spec);
  }

  // Parameter invariants, reported with field names.
  const ValidationReport rep = validate(p);
  for (const auto& e : rep.errors) errors.push_back(e);
  if (!(cfg.powers.pd > 0.0 && cfg.powers.pc > 0.0)) {
    errors.push_back("pd and pc must be positive");
  }
  if (!(cfg.sim.window_radius > 0.0)) errors.push_back("sim.window_radius must be > 0");
  if (cfg.sim.n_trials < 1) errors.push_back("sim.trials must be >= 1");
  if (!(cfg.quad.abs_tol > 0.0 && cfg.quad.rel_tol > 0.0)) {
    errors.push_back("quad tolerances must be positive");
  }
  if (cfg.quad.max_subdivisions < 1) errors.push_back("quad.max_subdivisions must be >= 1");
  if (!(cfg.solver.gamma >= 0.0 && cfg.solver.gamma < 1.0)) {
    errors.push_back("sca.gamma must lie in [0,1)");
  }
  if (cfg.validate_tau_points < 1) errors.push_back("validate.tau_points must be >= 1");

  if (!errors.empty()) {
    std::string msg = "config errors:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

std::string config_hash(const KeyValueMap& kv) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&](const std::string& s) {
    for (const unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [k, v] : kv) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace covertnet
