#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fasuav/energy.hpp"
#include "fasuav/rate.hpp"
#include "fasuav/selection.hpp"

namespace fasuav::cli {

enum class SweepParameter { p_u, alpha, n_ports, width, m, d };

std::string_view to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(std::string_view name);

/// Per-curve overrides of the base scenario. Unset fields keep the base value.
struct Curve {
  std::optional<int> n_ports{};
  std::optional<double> d{};
  std::optional<int> m{};
  std::optional<double> width{};

  /// Column suffix such as "_N10_d25_m1"; empty when nothing is overridden.
  std::string suffix() const;
  bool operator==(const Curve&) const = default;
};

struct OptimizeSettings {
  rate::Method method = rate::Method::exact;
  int grid = 32;
  double refine_tol = 1e-3;
  bool operator==(const OptimizeSettings&) const = default;
};

struct ExperimentSpec {
  rate::ScenarioConfig scenario{};
  energy::PowerModel power{};
  SweepParameter sweep_parameter = SweepParameter::p_u;
  std::vector<double> sweep_values;
  std::vector<rate::Method> methods{rate::Method::exact, rate::Method::monte_carlo, rate::Method::asymptotic};
  std::vector<selection::Strategy> strategies{selection::Strategy::mgs, selection::Strategy::rs};
  std::vector<Curve> curves;
  OptimizeSettings optimize{};
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::string output_path;

  bool uses_monte_carlo() const;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  bool operator==(const ExperimentSpec&) const = default;
};

/// Scenario with the sweep variable set to `value`. Distances keep the
/// horizontal UAV offset and move the UAV altitude.
rate::ScenarioConfig apply_sweep(const rate::ScenarioConfig& base, SweepParameter p, double value);

rate::ScenarioConfig apply_curve(const rate::ScenarioConfig& base, const Curve& curve);

/// Parses a JSON document. Defaults follow the baseline scenario; unknown
/// keys, wrong types and invariant violations throw ConfigError.
ExperimentSpec parse_config(std::string_view text);

/// Reads and parses `path`. A missing or unreadable file throws ConfigError.
ExperimentSpec load_config(const std::string& path);

/// Canonical JSON form. parse_config(serialize(s)) == s.
/// `indent` < 0 gives a single line.
std::string serialize(const ExperimentSpec& spec, int indent = 2);

}  // namespace fasuav::cli
