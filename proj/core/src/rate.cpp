#include "fasuav/rate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "fasuav/errors.hpp"
#include "fasuav/quadrature.hpp"

namespace fasuav::rate {
namespace {

using selection::Strategy;

void require_unit_interval(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
}

void validate_link(const LinkModel& link) {
  if (!(link.nu >= 0.0) || !std::isfinite(link.nu)) throw DomainError("link: nu must be finite and >= 0");
  require_unit_interval(link.alpha, "link: alpha");
  link.fading.validate();
}

unsigned resolve_workers(unsigned requested, std::uint64_t blocks) {
  unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(blocks, 1)));
}

// Runs fn(block) for every block index, spread over `workers` threads.
template <class Fn>
void for_each_block(std::uint64_t blocks, unsigned workers, Fn&& fn) {
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t b = next++; b < blocks; b = next++) fn(b);
    });
  }
}

struct Moments {
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t n = 0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  SampleStats stats() const {
    SampleStats s;
    s.mean = mean;
    s.count = n;
    s.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return s;
  }
};

std::uint64_t block_count(std::uint64_t trials) { return (trials + kMcBlockSize - 1) / kMcBlockSize; }

// Draws the gain products of one block into `out` (size = trials in block).
void draw_block(const LinkModel& link, const McOptions& opt, const EnvelopeSampler& sampler,
                std::uint64_t block, std::span<double> out) {
  RandomStream rng(opt.seed, block);
  const auto n = static_cast<std::size_t>(link.fas.n_ports());
  std::vector<double> down(n);
  std::vector<double> up(n);
  auto draw = [&](std::span<double> buf) {
    if (sampler) {
      sampler(rng, buf);
    } else {
      channel::sample_envelopes(link.fas, link.fading, rng, buf);
    }
  };
  for (double& x : out) {
    draw(down);
    const double h = selection::select(opt.strategy, down, rng).envelope;
    if (link.uplink_mode == UplinkMode::reciprocal) {
      const double h2 = h * h;
      x = h2 * h2;
    } else {
      draw(up);
      const double g = selection::select(opt.strategy, up, rng).envelope;
      x = h * h * g * g;
    }
  }
}

SampleStats simulate(const LinkModel& link, const McOptions& opt, const EnvelopeSampler& sampler,
                     const std::function<double(double)>& fn) {
  validate_link(link);
  if (opt.trials == 0) throw DomainError("monte carlo: trials must be >= 1");
  const std::uint64_t blocks = block_count(opt.trials);
  std::vector<Moments> per_block(blocks);
  for_each_block(blocks, resolve_workers(opt.workers, blocks), [&](std::uint64_t b) {
    const std::uint64_t begin = b * kMcBlockSize;
    const std::uint64_t len = std::min(kMcBlockSize, opt.trials - begin);
    std::vector<double> gains(len);
    draw_block(link, opt, sampler, b, gains);
    Moments mom;
    for (double x : gains) mom.add(fn(x));
    per_block[b] = mom;
  });
  Moments total;
  for (const auto& m : per_block) total.merge(m);
  return total.stats();
}

// Smallest envelope x with count * P(|h| > x) below `floor` (union bound on the max).
double envelope_tail_point(const channel::FadingParams& fading, double count, double floor) {
  auto tail = [&](double x) {
    return count * specfun::reg_upper_gamma(fading.m, fading.m * x * x / fading.sigma_sq);
  };
  double hi = std::sqrt(fading.sigma_sq);
  while (tail(hi) >= floor) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) >= floor ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

std::string_view to_string(UplinkMode mode) {
  return mode == UplinkMode::reciprocal ? "reciprocal" : "independent";
}

UplinkMode uplink_mode_from_string(std::string_view name) {
  if (name == "reciprocal") return UplinkMode::reciprocal;
  if (name == "independent") return UplinkMode::independent;
  throw DomainError("unknown uplink mode '" + std::string(name) + "'");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::exact:
      return "exact";
    case Method::monte_carlo:
      return "monte_carlo";
    case Method::asymptotic:
      return "asymptotic";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  if (name == "exact") return Method::exact;
  if (name == "monte_carlo" || name == "mc") return Method::monte_carlo;
  if (name == "asymptotic") return Method::asymptotic;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const {
  geometry.validate();
  path_loss.validate();
  fading.validate();
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("scenario: eta must lie in (0, 1]");
  if (!(p_u > 0.0) || !std::isfinite(p_u)) throw DomainError("scenario: p_u must be > 0");
  if (!(n0 > 0.0) || !std::isfinite(n0)) throw DomainError("scenario: n0 must be > 0");
  if (!(t_slot > 0.0) || !std::isfinite(t_slot)) throw DomainError("scenario: t_slot must be > 0");
  require_unit_interval(alpha, "scenario: alpha");
}

double snr_scale(const ScenarioConfig& cfg) {
  cfg.validate();
  const double l = cfg.path_gain();
  return cfg.eta * cfg.p_u * l * l * cfg.alpha / ((1.0 - cfg.alpha) * cfg.n0);
}

LinkModel link_model(const ScenarioConfig& cfg) {
  LinkModel link;
  link.nu = snr_scale(cfg);
  link.alpha = cfg.alpha;
  link.fas = cfg.fas;
  link.fading = cfg.fading;
  link.uplink_mode = cfg.uplink_mode;
  return link;
}

double instantaneous_snr(double selected_envelope, double nu) {
  if (!(selected_envelope >= 0.0) || !(nu >= 0.0)) throw DomainError("instantaneous_snr: inputs must be >= 0");
  const double h2 = selected_envelope * selected_envelope;
  return nu * h2 * h2;
}

double instantaneous_snr(double downlink_envelope, double uplink_envelope, double nu) {
  if (!(downlink_envelope >= 0.0) || !(uplink_envelope >= 0.0) || !(nu >= 0.0)) {
    throw DomainError("instantaneous_snr: inputs must be >= 0");
  }
  return nu * downlink_envelope * downlink_envelope * uplink_envelope * uplink_envelope;
}

// ------------------------------------------------------------------ exact

double snr_cdf(double gamma0, const LinkModel& link, Strategy strategy, const specfun::Tolerance& inner) {
  if (!(gamma0 >= 0.0)) throw DomainError("snr_cdf: gamma0 must be >= 0");
  if (gamma0 == 0.0) return 0.0;
  if (link.nu == 0.0) return 1.0;
  const double x = std::pow(gamma0 / link.nu, 0.25);
  return strategy == Strategy::mgs ? selection::fas_max_cdf(x, link.fas, link.fading, inner)
                                   : channel::marginal_envelope_cdf(x, link.fading);
}

RateResult ergodic_rate_exact(const LinkModel& link, Strategy strategy, const ExactOptions& opt) {
  validate_link(link);
  if (link.uplink_mode != UplinkMode::reciprocal) {
    throw UnsupportedModeError("ergodic_rate_exact: only the reciprocal uplink has a closed form");
  }
  RateResult out;
  out.method = Method::exact;
  if (link.nu == 0.0) return out;

  const double ports = strategy == Strategy::mgs ? link.fas.n_ports() : 1.0;
  const double x_hi = envelope_tail_point(link.fading, ports, opt.survival_floor);
  const double g_hi = link.nu * std::pow(x_hi, 4.0);
  if (!(g_hi < 1e15)) {
    throw NumericError("ergodic_rate_exact: SNR scale too large for the compactified range (nu=" +
                       std::to_string(link.nu) + ")");
  }
  const double t_max = g_hi / (1.0 + g_hi);

  std::vector<double> points{0.0};
  const double s4 = link.fading.sigma_sq * link.fading.sigma_sq;
  for (double c : {1e-4, 1e-2, 1.0, 1e2}) {
    const double g = link.nu * s4 * c;
    const double t = g / (1.0 + g);
    if (t > points.back() && t < t_max) points.push_back(t);
  }
  points.push_back(t_max);

  auto integrand = [&](double t) {
    const double one_minus_t = 1.0 - t;
    const double g = t / one_minus_t;
    return (1.0 - snr_cdf(g, link, strategy, opt.inner)) / one_minus_t;
  };
  const quadrature::Options qopt{.abs_tol = 1e-16,
                                 .rel_tol = opt.outer_rel_tol,
                                 .max_subdivisions = opt.outer_max_subdivisions};
  const auto res = quadrature::integrate(integrand, std::span<const double>(points), qopt);
  if (!res.converged && res.error > opt.outer_abs_tol) {
    throw NumericError("ergodic_rate_exact: outer quadrature did not converge (error " +
                       std::to_string(res.error) + ")");
  }
  out.rate = (1.0 - link.alpha) / std::numbers::ln2 * res.value;
  return out;
}

RateResult ergodic_rate_exact(const ScenarioConfig& cfg, Strategy strategy, const ExactOptions& opt) {
  return ergodic_rate_exact(link_model(cfg), strategy, opt);
}

// ------------------------------------------------------------ monte carlo

std::vector<double> sample_gain_products(const LinkModel& link, const McOptions& opt,
                                         const EnvelopeSampler& sampler) {
  validate_link(link);
  if (opt.trials == 0) throw DomainError("monte carlo: trials must be >= 1");
  std::vector<double> gains(opt.trials);
  const std::uint64_t blocks = block_count(opt.trials);
  for_each_block(blocks, resolve_workers(opt.workers, blocks), [&](std::uint64_t b) {
    const std::uint64_t begin = b * kMcBlockSize;
    const std::uint64_t len = std::min(kMcBlockSize, opt.trials - begin);
    draw_block(link, opt, sampler, b, std::span<double>(gains).subspan(begin, len));
  });
  return gains;
}

SampleStats block_statistics(std::span<const double> gains, const std::function<double(double)>& fn) {
  Moments total;
  for (std::size_t begin = 0; begin < gains.size(); begin += kMcBlockSize) {
    const std::size_t len = std::min<std::size_t>(kMcBlockSize, gains.size() - begin);
    Moments mom;
    for (double x : gains.subspan(begin, len)) mom.add(fn(x));
    total.merge(mom);
  }
  return total.stats();
}

RateResult ergodic_rate_mc(const LinkModel& link, const McOptions& opt, const EnvelopeSampler& sampler) {
  const double nu = link.nu;
  const auto st = simulate(link, opt, sampler, [nu](double x) { return std::log2(1.0 + nu * x); });
  RateResult out;
  out.method = Method::monte_carlo;
  out.rate = (1.0 - link.alpha) * st.mean;
  out.std_error = (1.0 - link.alpha) * st.std_error;
  out.trials = st.count;
  return out;
}

RateResult ergodic_rate_mc(const ScenarioConfig& cfg, const McOptions& opt, const EnvelopeSampler& sampler) {
  return ergodic_rate_mc(link_model(cfg), opt, sampler);
}

RateResult rate_from_gains(std::span<const double> gains, double nu, double alpha) {
  require_unit_interval(alpha, "rate_from_gains: alpha");
  if (gains.empty()) throw DomainError("rate_from_gains: no samples");
  const auto st = block_statistics(gains, [nu](double x) { return std::log2(1.0 + nu * x); });
  RateResult out;
  out.method = Method::monte_carlo;
  out.rate = (1.0 - alpha) * st.mean;
  out.std_error = (1.0 - alpha) * st.std_error;
  out.trials = st.count;
  return out;
}

SampleStats mc_mean_log_snr(const LinkModel& link, const McOptions& opt) {
  if (!(link.nu > 0.0)) throw DomainError("mc_mean_log_snr: nu must be > 0");
  const double log_nu = std::log(link.nu);
  return simulate(link, opt, {}, [log_nu](double x) { return log_nu + std::log(x); });
}

// ------------------------------------------------------------- asymptotic

AsymptoticParams asymptotic_params(const LinkModel& link, Strategy strategy) {
  validate_link(link);
  const int m = link.fading.m;
  const int n = strategy == Strategy::mgs ? link.fas.n_ports() : 1;
  const double s2 = link.fading.sigma_sq;
  if (n > 1 && link.fas.mu() >= 1.0) throw DomainError("asymptotic_params: a0 diverges for mu = 1");

  const double lm = std::log(static_cast<double>(m));
  // a0 = m^{m-1} / (Gamma(m) sigma^{2m} (m!)^{N-1}) * prod_{k=2}^{N} (m / (sigma^2 (1 - mu^2)))^m
  double log_a0 = (m - 1) * lm - specfun::ln_gamma(m) - m * std::log(s2);
  if (n > 1) {
    const double others = n - 1;
    log_a0 += -others * specfun::ln_gamma(m + 1.0) +
              others * m * (lm - std::log(s2) - std::log1p(-link.fas.mu_sq()));
  }
  AsymptoticParams p;
  p.s = m * n;
  p.log_a0 = log_a0;
  p.a0 = std::exp(log_a0);
  const double s = p.s;
  const double log_beta = -(specfun::ln_gamma(s) + log_a0 + std::log(s)) / s;
  p.scale = std::exp(log_beta) * std::sqrt(link.nu);
  return p;
}

AsymptoticParams asymptotic_params(const ScenarioConfig& cfg, Strategy strategy) {
  return asymptotic_params(link_model(cfg), strategy);
}

double mean_log_snr(const LinkModel& link, const AsymptoticParams& params) {
  if (!(link.nu > 0.0)) throw DomainError("mean_log_snr: nu must be > 0");
  const double s = params.s;
  return 2.0 * specfun::digamma(s) + std::log(link.nu) -
         (2.0 / s) * (specfun::ln_gamma(s) + params.log_a0 + std::log(s));
}

double mean_log_snr(const LinkModel& link, Strategy strategy) {
  return mean_log_snr(link, asymptotic_params(link, strategy));
}

double mean_log_snr(const ScenarioConfig& cfg, Strategy strategy) {
  return mean_log_snr(link_model(cfg), strategy);
}

RateResult ergodic_rate_asymptotic(const LinkModel& link, const AsymptoticParams& params) {
  RateResult out;
  out.method = Method::asymptotic;
  out.rate = (1.0 - link.alpha) / std::numbers::ln2 * mean_log_snr(link, params);
  out.below_asymptotic_regime = out.rate < 0.0;
  return out;
}

RateResult ergodic_rate_asymptotic(const LinkModel& link, Strategy strategy) {
  return ergodic_rate_asymptotic(link, asymptotic_params(link, strategy));
}

RateResult ergodic_rate_asymptotic(const ScenarioConfig& cfg, Strategy strategy) {
  return ergodic_rate_asymptotic(link_model(cfg), strategy);
}

}  // namespace fasuav::rate
