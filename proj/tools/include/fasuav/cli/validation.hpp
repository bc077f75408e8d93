#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fasuav::cli {

struct ValidationOptions {
  std::uint64_t trials_large = 1'000'000;  // criteria 3, 5 and 7
  std::uint64_t trials_trend = 100'000;    // criterion 8
  std::uint64_t seed = 20240611;
  unsigned workers = 0;
  double a0_multiplier = 1.0;  // perturbs the asymptote's a0; sensitivity hook
  std::vector<int> only;       // criterion ids to run, empty = all
};

struct CriterionReport {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string measured;
  std::string tolerance;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<std::string> details;
};

inline constexpr int kCriterionCount = 9;

/// Runs one acceptance criterion. Failures are reported, not thrown; an
/// unexpected exception marks the criterion failed with its message.
CriterionReport run_criterion(int id, const ValidationOptions& opt);

/// Runs the selected criteria in id order, calling `on_done` after each.
std::vector<CriterionReport> run_validation(const ValidationOptions& opt,
                                            const std::function<void(const CriterionReport&)>& on_done = {});

/// One summary line: "PASS  3  <title>  measured ...  tol ...  (12.3 s)".
std::string summary_line(const CriterionReport& r);

/// Summary line followed by indented detail lines.
std::string format_report(const CriterionReport& r);

}  // namespace fasuav::cli
