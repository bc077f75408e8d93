#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fasuav/cli/config.hpp"
#include "fasuav/cli/experiments.hpp"
#include "fasuav/cli/validation.hpp"
#include "fasuav/errors.hpp"

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kNumeric = 3, kValidation = 4 };

std::string one_line(std::string s) {
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int fail(int code, const char* kind, const std::string& key, const std::string& detail) {
  std::fprintf(stderr, "error code=%d kind=%s key=%s detail=%s\n", code, kind, key.empty() ? "-" : key.c_str(),
               one_line(detail).c_str());
  return code;
}

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned workers = 0;
};

int run_experiment(fasuav::cli::Command cmd, const RunArgs& a) {
  auto spec = fasuav::cli::load_config(a.config);
  if (a.seed) spec.seed = *a.seed;
  if (a.trials) spec.trials = *a.trials;
  spec.validate();
  const auto table = fasuav::cli::run(cmd, spec, {.workers = a.workers});
  fasuav::cli::write_csv(table, a.out.empty() ? spec.output_path : a.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fluid-antenna UAV wireless-powered link: rate and energy-efficiency experiments"};
  app.require_subcommand(1);

  RunArgs args;
  auto add_run = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "CSV output path, '-' for stdout (default: config 'output' or stdout)");
    sub->add_option("--seed", args.seed, "override mc.seed");
    sub->add_option("--trials", args.trials, "override mc.trials");
    sub->add_option("--workers", args.workers, "Monte Carlo threads, 0 = all cores");
    return sub;
  };
  auto* power = add_run("rate-vs-power", "ergodic rate against transmit power (sweep.parameter = p_u)");
  auto* alpha = add_run("rate-vs-alpha", "ergodic rate against the time-switching ratio (sweep.parameter = alpha)");
  auto* ports = add_run("ee-vs-ports", "energy efficiency at the optimal ratio against port count");

  fasuav::cli::ValidationOptions vopt;
  std::string report_path;
  auto* validate = app.add_subcommand("validate", "run the acceptance suite and print a pass/fail table");
  validate->add_option("--seed", vopt.seed, "Monte Carlo seed");
  validate->add_option("--trials", vopt.trials_trend, "trials per point for the trend checks")
      ->check(CLI::PositiveNumber);
  validate->add_option("--trials-large", vopt.trials_large, "trials for the Monte Carlo oracle checks")
      ->check(CLI::PositiveNumber);
  validate->add_option("--workers", vopt.workers, "Monte Carlo threads, 0 = all cores");
  validate->add_option("--only", vopt.only, "criterion ids to run")->check(CLI::Range(1, fasuav::cli::kCriterionCount));
  validate->add_option("--out", report_path, "also write the report to this file");
  validate->add_option("--perturb-a0", vopt.a0_multiplier, "scale the asymptote's a0 (sensitivity check)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kConfig, "usage", "", e.what());
  }

  try {
    if (*power) return run_experiment(fasuav::cli::Command::rate_vs_power, args);
    if (*alpha) return run_experiment(fasuav::cli::Command::rate_vs_alpha, args);
    if (*ports) return run_experiment(fasuav::cli::Command::ee_vs_ports, args);

    std::string report;
    int passed = 0;
    const auto results = fasuav::cli::run_validation(vopt, [&](const fasuav::cli::CriterionReport& r) {
      const auto text = fasuav::cli::format_report(r);
      std::cout << text << std::flush;
      report += text;
      passed += r.passed;
    });
    const auto total = static_cast<int>(results.size());
    std::string tail = "validation: " + std::to_string(passed) + "/" + std::to_string(total) + " criteria passed\n";
    std::cout << tail;
    report += tail;
    if (!report_path.empty()) {
      std::ofstream(report_path, std::ios::binary) << report;
    }
    return passed == total ? kOk : kValidation;
  } catch (const fasuav::ConfigError& e) {
    return fail(kConfig, "config", e.key_path(), e.what());
  } catch (const fasuav::DomainError& e) {
    return fail(kConfig, "domain", "", e.what());
  } catch (const fasuav::UnsupportedModeError& e) {
    return fail(kConfig, "unsupported", "", e.what());
  } catch (const fasuav::NumericError& e) {
    return fail(kNumeric, "numeric", "", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", "", e.what());
  }
}
