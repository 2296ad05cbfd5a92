#include <doctest.h>

#include <cmath>
#include <sstream>

#include "covertnet/config.hpp"
#include "covertnet/harness.hpp"

using namespace covertnet;

TEST_CASE("config parsing and overrides") {
  const KeyValueMap kv = parse_config_text("lambda_d = 0.2 # comment\npd_dbm = 10\n");
  CHECK(kv.at("lambda_d") == "0.2");
  CHECK(kv.at("pd_dbm") == "10");
  CHECK_THROWS_AS(parse_config_text("lambda_d = 1\nlambda_d = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("no equals sign\n"), ConfigError);

  KeyValueMap base;
  apply_overrides(base, {"pc_dbw=3", "sim.trials=77"});
  CHECK(base.at("pc_dbw") == "3");
  CHECK_THROWS_AS(apply_overrides(base, {"notakeyvalue"}), ConfigError);
}

TEST_CASE("resolve applies defaults and unit suffixes") {
  const Config cfg = resolve_config({});
  CHECK(cfg.params.lambda_d == 0.1);
  CHECK(cfg.params.noise_a == doctest::Approx(1e-12).epsilon(1e-9));
  CHECK(cfg.params.theta_d == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(cfg.powers.pd == doctest::Approx(0.0316227766).epsilon(1e-8));
  CHECK(cfg.t_max == doctest::Approx(1e-6).epsilon(1e-9));

  const Config watts = resolve_config({{"pd_watt", "0.02"}, {"theta_c_linear", "2"}});
  CHECK(watts.powers.pd == 0.02);
  CHECK(watts.theta_c == 2.0);
}

TEST_CASE("unknown keys and invalid values are named in errors") {
  CHECK_THROWS_WITH_AS(resolve_config({{"bogus_key", "1"}}),
                       doctest::Contains("unknown key 'bogus_key'"), ConfigError);
  CHECK_THROWS_WITH_AS(resolve_config({{"alpha", "2"}}),
                       doctest::Contains("alpha must exceed 2"), ConfigError);
  CHECK_THROWS_WITH_AS(resolve_config({{"lambda_d", "abc"}}),
                       doctest::Contains("not a number"), ConfigError);
  CHECK_THROWS_WITH_AS(resolve_config({{"pd_min_dbm", "10"}, {"pd_max_dbm", "0"}}),
                       doctest::Contains("empty power box"), ConfigError);
}

TEST_CASE("fixed-power keys collapse the box") {
  const Config cfg = resolve_config({{"pc_fixed_dbw", "10"}});
  CHECK(cfg.params.pc_min == cfg.params.pc_max);
  CHECK(cfg.powers.pc == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("sweep specs are validated") {
  const Config cfg = resolve_config({{"sweep.variable", "pd_dbm"},
                                     {"sweep.start", "0"},
                                     {"sweep.stop", "10"},
                                     {"sweep.count", "3"},
                                     {"sweep.target", "metrics"}});
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->values.size() == 3);
  CHECK(cfg.sweep->values[1] == doctest::Approx(5.0));

  CHECK_THROWS_WITH_AS(resolve_config({{"sweep.variable", "nope"},
                                       {"sweep.values", "1,2"}}),
                       doctest::Contains("unknown parameter"), ConfigError);
  CHECK_THROWS_WITH_AS(resolve_config({{"sweep.variable", "pd_dbm"},
                                       {"sweep.values", "1,3,2"}}),
                       doctest::Contains("monotone"), ConfigError);
  CHECK_THROWS_WITH_AS(resolve_config({{"sweep.variable", "pd_dbm"}}),
                       doctest::Contains("sweep needs"), ConfigError);
}

TEST_CASE("config hash is order-insensitive and content-sensitive") {
  const KeyValueMap a{{"x", "1"}, {"y", "2"}};
  const KeyValueMap b{{"y", "2"}, {"x", "1"}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash({{"x", "1"}, {"y", "3"}}));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("CSV quoting follows RFC-4180 rules") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("metrics output is deterministic and complete") {
  const Config cfg = resolve_config({});
  const MetricsResult a = run_metrics(cfg);
  const MetricsResult b = run_metrics(cfg);
  CHECK(a.csv == b.csv);
  CHECK(a.csv.find("d2d_success,") != std::string::npos);
  CHECK(a.csv.find("tau_star_watt,") != std::string::npos);
  CHECK(a.csv.find("utility,") != std::string::npos);
}

TEST_CASE("simulate output is deterministic for a fixed seed") {
  const Config cfg = resolve_config({{"sim.trials", "2000"}, {"sim.seed", "5"}});
  CHECK(run_simulate(cfg).csv == run_simulate(cfg).csv);
  const Config other = resolve_config({{"sim.trials", "2000"}, {"sim.seed", "6"}});
  CHECK(run_simulate(cfg).csv != run_simulate(other).csv);
}

TEST_CASE("validation passes at defaults and fails under the negative control") {
  const Config cfg = resolve_config({{"sim.trials", "20000"}, {"sim.seed", "12"}});
  const ValidateResult good = run_validate(cfg);
  CHECK(good.pass);
  CHECK(good.max_deviation_se <= 3.0);

  // Scaling the densities seen by the analytic side only must break the
  // agreement: this guards against a validator that never compares anything.
  const Config corrupted = resolve_config(
      {{"sim.trials", "20000"}, {"sim.seed", "12"}, {"validate.iota_scale", "3"}});
  const ValidateResult bad = run_validate(corrupted);
  CHECK(!bad.pass);
}

TEST_CASE("degenerate empty D2D network validates exactly") {
  const Config cfg = resolve_config({{"lambda_d", "1e-12"},
                                     {"sim.trials", "3000"},
                                     {"sim.seed", "4"},
                                     {"validate.tau_points", "3"}});
  const ValidateResult res = run_validate(cfg);
  CHECK(res.pass);
}

TEST_CASE("detect scan brackets the reported best response") {
  const Config cfg = resolve_config({});
  const DetectResult res = run_detect(cfg);
  CHECK(res.solution.error < 1.0);
  CHECK(res.csv.rfind("tau_watt,fa,md,detection_error", 0) == 0);
  // Every scanned row's error must be >= the refined optimum.
  std::istringstream lines(res.csv);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line == "\r") continue;
    const auto last_comma = line.find_last_of(',');
    const double err = std::stod(line.substr(last_comma + 1));
    CHECK(err >= res.solution.error - 1e-9);
    ++rows;
  }
  CHECK(rows >= 32);
}

TEST_CASE("sweep emits one ordered row per point with the fixed schema") {
  const Config cfg = resolve_config({{"sweep.variable", "pd_dbm"},
                                     {"sweep.start", "0"},
                                     {"sweep.stop", "15"},
                                     {"sweep.count", "4"},
                                     {"sweep.target", "metrics"}});
  const SweepResult res = run_sweep(cfg);
  std::istringstream lines(res.csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("variable,value,pd_watt,pc_watt,tau_star_watt,fa,md,"
                     "detection_error,d2d_success,rate_with,rate_without,"
                     "mean_interference_watt,utility,infeasible,converged,"
                     "iterations",
                     0) == 0);
  std::string line;
  std::vector<double> values;
  while (std::getline(lines, line)) {
    if (line.empty() || line == "\r") continue;
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    values.push_back(std::stod(line.substr(first + 1, second - first - 1)));
  }
  REQUIRE(values.size() == 4);
  CHECK(values.front() == doctest::Approx(0.0));
  CHECK(values.back() == doctest::Approx(15.0));

  // Worker count must not change the bytes.
  Config threaded = cfg;
  threaded.sweep->workers = 3;
  CHECK(run_sweep(threaded).csv == res.csv);
}

TEST_CASE("sweep zeroes the utility on infeasible points") {
  // High D2D power against the weakest cover violates covertness.
  const Config cfg = resolve_config({{"sweep.variable", "pd_dbm"},
                                     {"sweep.values", "20"},
                                     {"sweep.target", "metrics"},
                                     {"pc_fixed_dbw", "-10"}});
  const SweepResult res = run_sweep(cfg);
  CHECK(res.n_infeasible == 1);
  std::istringstream lines(res.csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  // utility is the 13th column, infeasible the 14th.
  std::vector<std::string> cells;
  std::istringstream cs(row);
  std::string cell;
  while (std::getline(cs, cell, ',')) cells.push_back(cell);
  REQUIRE(cells.size() >= 16);
  CHECK(std::stod(cells[12]) == 0.0);
  CHECK(cells[13] == "1");
}
