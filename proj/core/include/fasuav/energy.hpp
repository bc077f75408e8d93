#pragma once

#include <cstdint>
#include <functional>

#include "fasuav/rate.hpp"
#include "fasuav/selection.hpp"

namespace fasuav::energy {

/// Rotary-wing UAV power draw while hovering plus circuit power, in watts.
/// The transmit power P_u is added on top by total_power().
struct PowerModel {
  double p_c = 0.1;    // communication circuit power
  double p_o = 79.86;  // blade profile power
  double p_i = 88.63;  // induced power

  void validate() const;
  double hover() const { return p_o + p_i; }
  bool operator==(const PowerModel&) const = default;
};

/// E = eta P_u L(d) |h|^2 alpha T, in joules.
double harvested_energy(const rate::ScenarioConfig& cfg, double envelope);

/// P_tot = P_c + P_u + P_o + P_i.
double total_power(const PowerModel& model, double p_u);

/// zeta = rate / P_tot, in bits/s/Hz per watt.
double energy_efficiency(double rate, double p_total);

struct OptimizeOptions {
  rate::Method method = rate::Method::exact;  // exact or monte_carlo
  selection::Strategy strategy = selection::Strategy::mgs;
  int grid = 32;
  double refine_tol = 1e-3;
  rate::ExactOptions exact{};
  rate::McOptions mc{};  // trials, seed and workers; strategy is taken from above
};

struct EfficiencyResult {
  double alpha_star = 0.5;
  double rate_at_optimum = 0.0;
  double rate_std_error = 0.0;  // nonzero only for monte_carlo
  double zeta = 0.0;
  double p_total = 0.0;
  bool multimodal = false;  // coarse grid showed more than one local maximum
  int evaluations = 0;
};

/// Rate as a function of the time-switching ratio, for a fixed scenario.
/// Monte Carlo curves reuse one set of gain draws across every alpha, so the
/// curve is smooth in alpha and bit-reproducible for a given seed.
class AlphaRateCurve {
 public:
  AlphaRateCurve(const rate::ScenarioConfig& cfg, const OptimizeOptions& opt);

  rate::RateResult operator()(double alpha) const;

 private:
  rate::ScenarioConfig cfg_;
  OptimizeOptions opt_;
  std::vector<double> gains_;
};

/// Maximizes `curve` over alpha in (0, 1): scans alpha_i = i / (grid + 1),
/// i = 1..grid, then golden-section refines the bracket around the best grid
/// point down to refine_tol. Throws NumericError if every grid rate is zero.
EfficiencyResult maximize_rate(const std::function<rate::RateResult(double)>& curve, int grid,
                               double refine_tol);

/// Optimal time split for `cfg` (its alpha is ignored) and the resulting
/// energy efficiency under `power`.
EfficiencyResult optimize_alpha(const rate::ScenarioConfig& cfg, const PowerModel& power,
                                const OptimizeOptions& opt = {});

}  // namespace fasuav::energy
