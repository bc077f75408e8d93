#include "fasuav/energy.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "fasuav/errors.hpp"
#include "fasuav/log.hpp"

namespace fasuav::energy {

void PowerModel::validate() const {
  if (!(p_c >= 0.0) || !(p_o >= 0.0) || !(p_i >= 0.0) || !std::isfinite(p_c + p_o + p_i)) {
    throw DomainError("power model: p_c, p_o and p_i must be finite and >= 0");
  }
}

double harvested_energy(const rate::ScenarioConfig& cfg, double envelope) {
  cfg.validate();
  if (!(envelope >= 0.0)) throw DomainError("harvested_energy: envelope must be >= 0");
  return cfg.eta * cfg.p_u * cfg.path_gain() * envelope * envelope * cfg.alpha * cfg.t_slot;
}

double total_power(const PowerModel& model, double p_u) {
  model.validate();
  if (!(p_u > 0.0) || !std::isfinite(p_u)) throw DomainError("total_power: p_u must be > 0");
  return model.p_c + p_u + model.p_o + model.p_i;
}

double energy_efficiency(double rate, double p_total) {
  if (!(p_total > 0.0)) throw DomainError("energy_efficiency: p_total must be > 0");
  if (!(rate >= 0.0)) throw DomainError("energy_efficiency: rate must be >= 0");
  return rate / p_total;
}

AlphaRateCurve::AlphaRateCurve(const rate::ScenarioConfig& cfg, const OptimizeOptions& opt)
    : cfg_(cfg), opt_(opt) {
  cfg_.validate();
  if (opt_.method == rate::Method::asymptotic) {
    throw UnsupportedModeError("optimize_alpha: method must be exact or monte_carlo");
  }
  opt_.mc.strategy = opt_.strategy;
  if (opt_.method == rate::Method::monte_carlo) {
    gains_ = rate::sample_gain_products(rate::link_model(cfg_), opt_.mc);
  }
}

rate::RateResult AlphaRateCurve::operator()(double alpha) const {
  auto cfg = cfg_;
  cfg.alpha = alpha;
  if (opt_.method == rate::Method::exact) return rate::ergodic_rate_exact(cfg, opt_.strategy, opt_.exact);
  return rate::rate_from_gains(gains_, rate::snr_scale(cfg), alpha);
}

EfficiencyResult maximize_rate(const std::function<rate::RateResult(double)>& curve, int grid,
                               double refine_tol) {
  if (grid < 8) throw DomainError("optimize_alpha: grid must be >= 8");
  if (!(refine_tol > 0.0 && refine_tol < 0.1)) throw DomainError("optimize_alpha: refine_tol must lie in (0, 0.1)");

  EfficiencyResult out;
  std::vector<double> alphas(grid);
  std::vector<rate::RateResult> rates(grid);
  for (int i = 0; i < grid; ++i) {
    alphas[i] = static_cast<double>(i + 1) / (grid + 1);
    rates[i] = curve(alphas[i]);
  }
  out.evaluations = grid;

  int best = 0;
  for (int i = 1; i < grid; ++i) {
    if (rates[i].rate > rates[best].rate) best = i;
  }
  if (!(rates[best].rate > 0.0)) throw NumericError("optimize_alpha: every grid rate is zero (degenerate scenario)");

  int peaks = 0;
  for (int i = 0; i < grid; ++i) {
    const bool above_left = i == 0 || rates[i].rate > rates[i - 1].rate;
    const bool above_right = i == grid - 1 || rates[i].rate > rates[i + 1].rate;
    if (above_left && above_right) ++peaks;
  }
  if (peaks > 1) {
    out.multimodal = true;
    std::ostringstream msg;
    msg << "rate vs alpha has " << peaks << " local maxima on the grid; refining the highest";
    log::warn(msg.str());
  }

  double best_alpha = alphas[best];
  rate::RateResult best_rate = rates[best];
  double lo = best == 0 ? 0.0 : alphas[best - 1];
  double hi = best == grid - 1 ? 1.0 : alphas[best + 1];

  constexpr double inv_phi = 0.6180339887498949;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  auto fc = curve(c);
  auto fd = curve(d);
  out.evaluations += 2;
  auto consider = [&](double a, const rate::RateResult& r) {
    if (r.rate > best_rate.rate) {
      best_rate = r;
      best_alpha = a;
    }
  };
  consider(c, fc);
  consider(d, fd);
  while (hi - lo > refine_tol) {
    if (fc.rate >= fd.rate) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = curve(c);
      consider(c, fc);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = curve(d);
      consider(d, fd);
    }
    ++out.evaluations;
  }

  out.alpha_star = best_alpha;
  out.rate_at_optimum = best_rate.rate;
  out.rate_std_error = best_rate.std_error;
  return out;
}

EfficiencyResult optimize_alpha(const rate::ScenarioConfig& cfg, const PowerModel& power,
                                const OptimizeOptions& opt) {
  const AlphaRateCurve curve(cfg, opt);
  auto out = maximize_rate([&curve](double a) { return curve(a); }, opt.grid, opt.refine_tol);
  out.p_total = total_power(power, cfg.p_u);
  out.zeta = energy_efficiency(out.rate_at_optimum, out.p_total);
  return out;
}

}  // namespace fasuav::energy
