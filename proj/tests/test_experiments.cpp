#include <cmath>
#include <string>

#include "doctest.h"
#include "fasuav/cli/config.hpp"
#include "fasuav/cli/experiments.hpp"
#include "fasuav/errors.hpp"

using namespace fasuav;
using namespace fasuav::cli;

TEST_SUITE("experiments") {

TEST_CASE("rate-vs-power layout, monotonicity and method agreement") {
  auto spec = parse_config(R"({"fas": {"n_ports": 4},
      "sweep": {"parameter": "p_u", "values": [1, 10, 100, 1000]}, "mc": {"trials": 200000, "seed": 5}})");
  const auto t = run(Command::rate_vs_power, spec);
  const std::vector<std::string> cols{"sweep_value",     "rate_exact",         "rate_mc",
                                      "rate_mc_stderr",  "rate_asymptotic",    "rate_exact_rs",
                                      "rate_mc_rs",      "rate_mc_stderr_rs",  "rate_asymptotic_rs"};
  CHECK(t.columns == cols);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.comments.at(0) == "command: rate-vs-power");
  CHECK(t.comments.at(2) == "seed: 5");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    CAPTURE(i);
    CHECK(r[t.column("sweep_value")] == spec.sweep_values[i]);
    const double se = r[t.column("rate_mc_stderr")];
    CHECK(std::abs(r[t.column("rate_exact")] - r[t.column("rate_mc")]) <= 4.0 * se);
    CHECK(std::abs(r[t.column("rate_exact_rs")] - r[t.column("rate_mc_rs")]) <= 4.0 * r[t.column("rate_mc_stderr_rs")]);
    CHECK(r[t.column("rate_exact")] > r[t.column("rate_exact_rs")]);
    if (i > 0) {
      CHECK(r[t.column("rate_exact")] > t.rows[i - 1][t.column("rate_exact")]);
      CHECK(r[t.column("rate_mc")] > t.rows[i - 1][t.column("rate_mc")]);
    }
  }
  // asymptote tightens with power
  const auto gap = [&](std::size_t i) {
    return std::abs(t.at(i, "rate_asymptotic") - t.at(i, "rate_exact")) / t.at(i, "rate_exact");
  };
  CHECK(gap(3) < gap(0));
}

TEST_CASE("CSV output is deterministic and independent of worker count") {
  auto spec = parse_config(R"({"fas": {"n_ports": 3},
      "sweep": {"parameter": "p_u", "values": [1, 10], "methods": ["monte_carlo"]}, "mc": {"trials": 20000}})");
  const auto a = run(Command::rate_vs_power, spec, {.workers = 1}).to_csv();
  const auto b = run(Command::rate_vs_power, spec, {.workers = 3}).to_csv();
  CHECK(a == b);
  CHECK(a.rfind("# command: rate-vs-power\n# config: {", 0) == 0);
  CHECK(a.find("\nsweep_value,rate_mc,rate_mc_stderr,rate_mc_rs,rate_mc_stderr_rs\n") != std::string::npos);
  spec.seed = 2;
  CHECK(run(Command::rate_vs_power, spec, {.workers = 1}).to_csv() != a);
}

TEST_CASE("rate-vs-alpha marks one argmax per curve") {
  auto spec = parse_config(R"({"sweep": {"parameter": "alpha", "values": [0.1, 0.3, 0.5, 0.7, 0.9],
      "methods": ["exact"], "strategies": ["mgs"], "curves": [{"n_ports": 10}, {"d": 50}]}})");
  const auto t = run(Command::rate_vs_alpha, spec);
  const std::vector<std::string> cols{"sweep_value", "rate_exact_N10", "argmax_N10", "rate_exact_d50", "argmax_d50"};
  CHECK(t.columns == cols);
  for (const char* sfx : {"_N10", "_d50"}) {
    const auto rc = t.column(std::string("rate_exact") + sfx);
    const auto ac = t.column(std::string("argmax") + sfx);
    double flags = 0.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      flags += t.rows[i][ac];
      if (t.rows[i][rc] > t.rows[best][rc]) best = i;
    }
    CHECK(flags == 1.0);
    CHECK(t.rows[best][ac] == 1.0);
    CHECK(best > 0);
    CHECK(best + 1 < t.rows.size());
  }
}

TEST_CASE("ee-vs-ports columns and trend") {
  auto spec = parse_config(R"({"fading": {"m": 2},
      "sweep": {"parameter": "n_ports", "values": [5, 10, 20], "strategies": ["mgs"], "optimize": {"grid": 16}}})");
  const auto t = run(Command::ee_vs_ports, spec);
  CHECK(t.columns == std::vector<std::string>{"n_ports", "zeta_mgs", "alpha_star_mgs"});
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i][2] > 0.0);
    CHECK(t.rows[i][2] < 1.0);
    if (i > 0) CHECK(t.rows[i][1] > t.rows[i - 1][1]);
  }
}

TEST_CASE("command and sweep parameter must agree") {
  auto spec = parse_config(R"({"sweep": {"parameter": "alpha", "values": [0.5]}})");
  try {
    run(Command::rate_vs_power, spec);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "sweep.parameter");
  }
}

TEST_CASE("errors carry the sweep point") {
  auto spec = parse_config(R"({"pathloss": {"beta_ref": 1e12},
      "sweep": {"parameter": "p_u", "values": [1, 1e12], "methods": ["exact"], "strategies": ["mgs"]}})");
  try {
    run(Command::rate_vs_power, spec);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("sweep point p_u=") != std::string::npos);
  }
}

TEST_CASE("ResultTable basics") {
  ResultTable t;
  t.columns = {"a", "b"};
  t.add_row({1.0, std::nan("")});
  t.add_row({0.1, 1e-20});
  CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
  CHECK_THROWS_AS(t.column("c"), std::out_of_range);
  CHECK(t.has_column("b"));
  CHECK(t.to_csv() == "a,b\n1,nan\n0.1,1e-20\n");
}

}  // TEST_SUITE
