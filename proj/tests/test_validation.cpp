#include <string>

#include "doctest.h"
#include "fasuav/cli/validation.hpp"

using namespace fasuav::cli;

TEST_SUITE("validation") {

TEST_CASE("criterion 7 closed-form line reacts to a perturbed a0") {
  ValidationOptions opt;
  opt.trials_large = 4096;
  auto first_line = [](const CriterionReport& r) { return r.details.empty() ? std::string() : r.details.front(); };

  const auto clean = run_criterion(7, opt);
  CHECK(clean.id == 7);
  CHECK(first_line(clean).rfind("ok   ", 0) == 0);

  opt.a0_multiplier = 1.05;
  const auto bad = run_criterion(7, opt);
  CHECK(first_line(bad).rfind("FAIL ", 0) == 0);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("criterion 1 passes and reports") {
  const auto r = run_criterion(1, {});
  CHECK(r.passed);
  CHECK(summary_line(r).rfind("PASS", 0) == 0);
  CHECK(format_report(r).find('\n') != std::string::npos);
}

TEST_CASE("run_validation honours the selection") {
  ValidationOptions opt;
  opt.only = {4, 1};
  std::vector<int> seen;
  const auto all = run_validation(opt, [&](const CriterionReport& r) { seen.push_back(r.id); });
  CHECK(seen == std::vector<int>{1, 4});
  CHECK(all.size() == 2);
}

}  // TEST_SUITE
