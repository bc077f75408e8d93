#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "fasuav/channel.hpp"
#include "fasuav/random.hpp"
#include "fasuav/selection.hpp"
#include "fasuav/specfun.hpp"

namespace fasuav::rate {

enum class UplinkMode {
  reciprocal,   // uplink gain equals the selected downlink gain: gamma = nu |h|^4
  independent,  // fresh uplink draw with its own selection: gamma = nu |h|^2 |g|^2
};

enum class Method { exact, monte_carlo, asymptotic };

std::string_view to_string(UplinkMode mode);
UplinkMode uplink_mode_from_string(std::string_view name);
std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

/// Complete description of one harvest-then-transmit link.
struct ScenarioConfig {
  channel::Geometry geometry = channel::Geometry::vertical(25.0);
  channel::PathLossParams path_loss{};
  channel::FasGeometry fas = channel::FasGeometry::from_width(10, 2.0);
  channel::FadingParams fading{};
  double eta = 0.8;     // energy conversion efficiency
  double p_u = 1.0;     // UAV transmit power [W]
  double n0 = 1e-9;     // noise power [W]
  double alpha = 0.5;   // fraction of the slot spent harvesting
  double t_slot = 1.0;  // slot duration [s]
  UplinkMode uplink_mode = UplinkMode::reciprocal;

  void validate() const;
  double distance() const { return channel::distance(geometry); }
  double path_gain() const { return channel::path_loss(distance(), path_loss); }
  bool operator==(const ScenarioConfig&) const = default;
};

/// The reduced view of a scenario that the rate expressions depend on.
struct LinkModel {
  double nu = 1.0;  // SNR scale, gamma_r = nu |h|^4
  double alpha = 0.5;
  channel::FasGeometry fas = channel::FasGeometry::from_width(1, 0.0);
  channel::FadingParams fading{};
  UplinkMode uplink_mode = UplinkMode::reciprocal;
};

LinkModel link_model(const ScenarioConfig& cfg);

struct RateResult {
  double rate = 0.0;  // bits/s/Hz
  Method method = Method::exact;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  bool below_asymptotic_regime = false;  // asymptote came out negative
};

struct AsymptoticParams {
  int s = 1;             // diversity order m N
  double a0 = 1.0;       // leading coefficient of F_{|h|^2}(y) ~ a0 y^s
  double log_a0 = 0.0;
  double scale = 1.0;    // Gamma scale of sqrt(gamma_r)
};

/// nu = eta P_u L(d)^2 alpha / ((1 - alpha) N0). The path gain is squared:
/// the node spends energy harvested over the downlink on the uplink.
double snr_scale(const ScenarioConfig& cfg);

/// gamma_r = nu |h|^4 (reciprocal link).
double instantaneous_snr(double selected_envelope, double nu);

/// gamma_r = nu |h|^2 |g|^2 (independent uplink).
double instantaneous_snr(double downlink_envelope, double uplink_envelope, double nu);

// ---------------------------------------------------------------- exact --

struct ExactOptions {
  specfun::Tolerance inner = selection::kCdfTolerance;
  double outer_rel_tol = 1e-7;
  double outer_abs_tol = 1e-6;
  double survival_floor = 1e-10;  // outer range ends where 1 - F_gamma drops below this
  int outer_max_subdivisions = 4000;
};

/// F_gamma(g0) = P(gamma_r <= g0) = F_sel((g0 / nu)^{1/4}) where F_sel is the
/// CDF of the selected envelope (fas_max_cdf for MGS, the marginal for RS).
double snr_cdf(double gamma0, const LinkModel& link, selection::Strategy strategy = selection::Strategy::mgs,
               const specfun::Tolerance& inner = selection::kCdfTolerance);

/// Ergodic rate ((1 - alpha) / ln 2) int_0^inf (1 - F_gamma(g)) / (1 + g) dg.
///
/// The range is compactified with t = g / (1 + g); the transformed integrand
/// is (1 - F_gamma(t / (1 - t))) / (1 - t) on [0, t_max], where t_max is the
/// point beyond which a union bound puts the survival under survival_floor.
/// Only the reciprocal uplink has this closed form; independent mode throws
/// UnsupportedModeError.
RateResult ergodic_rate_exact(const LinkModel& link, selection::Strategy strategy = selection::Strategy::mgs,
                              const ExactOptions& opt = {});
RateResult ergodic_rate_exact(const ScenarioConfig& cfg, selection::Strategy strategy = selection::Strategy::mgs,
                              const ExactOptions& opt = {});

// ---------------------------------------------------------- monte carlo --

/// Fills the span (size N) with one envelope draw. The default draws from
/// channel::sample_envelopes; tests substitute deterministic samplers.
using EnvelopeSampler = std::function<void(RandomStream&, std::span<double>)>;

struct McOptions {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  selection::Strategy strategy = selection::Strategy::mgs;
  unsigned workers = 0;  // 0 = hardware concurrency
};

/// Trials are generated in fixed blocks of this many, block b drawing from
/// RandomStream(seed, b); results do not depend on the worker count.
inline constexpr std::uint64_t kMcBlockSize = 4096;

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t count = 0;
};

/// Per-trial channel gain products X (gamma_r = nu X): |h|^4 in reciprocal
/// mode, |h|^2 |g|^2 in independent mode, in trial order.
std::vector<double> sample_gain_products(const LinkModel& link, const McOptions& opt,
                                         const EnvelopeSampler& sampler = {});

/// Mean and standard error of fn(X) over the samples, reduced block by block
/// in a fixed order.
SampleStats block_statistics(std::span<const double> gains, const std::function<double(double)>& fn);

RateResult ergodic_rate_mc(const LinkModel& link, const McOptions& opt, const EnvelopeSampler& sampler = {});
RateResult ergodic_rate_mc(const ScenarioConfig& cfg, const McOptions& opt, const EnvelopeSampler& sampler = {});

/// Rate estimate (1 - alpha) mean(log2(1 + nu X)) from pre-drawn gain products.
RateResult rate_from_gains(std::span<const double> gains, double nu, double alpha);

/// Monte Carlo estimate of E[ln gamma_r].
SampleStats mc_mean_log_snr(const LinkModel& link, const McOptions& opt);

// ----------------------------------------------------------- asymptotic --

/// s = m N, log-space a0 and the Gamma scale (1 / (Gamma(s) a0 s))^{1/s} sqrt(nu).
/// Random selection behaves as a single port (N = 1). Throws DomainError for
/// mu = 1 with more than one port.
AsymptoticParams asymptotic_params(const LinkModel& link, selection::Strategy strategy = selection::Strategy::mgs);
AsymptoticParams asymptotic_params(const ScenarioConfig& cfg, selection::Strategy strategy = selection::Strategy::mgs);

/// E[ln gamma_r] under the Gamma approximation of sqrt(gamma_r):
/// 2 psi(s) + ln nu - (2 / s) ln(Gamma(s) a0 s).
double mean_log_snr(const LinkModel& link, const AsymptoticParams& params);
double mean_log_snr(const LinkModel& link, selection::Strategy strategy = selection::Strategy::mgs);
double mean_log_snr(const ScenarioConfig& cfg, selection::Strategy strategy = selection::Strategy::mgs);

/// ((1 - alpha) / ln 2) E[ln gamma_r]. Negative values are returned as-is with
/// below_asymptotic_regime set.
RateResult ergodic_rate_asymptotic(const LinkModel& link, const AsymptoticParams& params);
RateResult ergodic_rate_asymptotic(const LinkModel& link, selection::Strategy strategy = selection::Strategy::mgs);
RateResult ergodic_rate_asymptotic(const ScenarioConfig& cfg,
                                   selection::Strategy strategy = selection::Strategy::mgs);

}  // namespace fasuav::rate
