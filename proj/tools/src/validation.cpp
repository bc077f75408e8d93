#include "fasuav/cli/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fasuav/channel.hpp"
#include "fasuav/cli/config.hpp"
#include "fasuav/cli/experiments.hpp"
#include "fasuav/energy.hpp"
#include "fasuav/rate.hpp"
#include "fasuav/selection.hpp"
#include "fasuav/specfun.hpp"

namespace fasuav::cli {

namespace {

using channel::FadingParams;
using channel::FasGeometry;
using selection::Strategy;

std::string sci(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct Outcome {
  bool ok = true;
  double worst = 0.0;  // largest error or ratio seen
  std::vector<std::string> details;

  void note(std::string line) { details.push_back(std::move(line)); }
  void check(bool pass, std::string line) {
    ok = ok && pass;
    details.push_back((pass ? "ok   " : "FAIL ") + line);
  }
};

// Baseline scenario of the simulation section with the given port count.
rate::ScenarioConfig baseline(int n_ports, int m) {
  rate::ScenarioConfig cfg;
  cfg.fas = FasGeometry::from_width(n_ports, 2.0);
  cfg.fading.m = m;
  return cfg;
}

rate::AsymptoticParams perturbed(const rate::LinkModel& link, Strategy s, double k) {
  auto p = rate::asymptotic_params(link, s);
  if (k != 1.0) {
    p.a0 *= k;
    p.log_a0 += std::log(k);
    p.scale *= std::pow(k, -1.0 / p.s);
  }
  return p;
}

// x with P(m, m x^2 / sigma^2) = p, by bisection on the marginal CDF.
double marginal_quantile(double p, const FadingParams& f) {
  double lo = 0.0, hi = 1.0;
  while (channel::marginal_envelope_cdf(hi, f) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (channel::marginal_envelope_cdf(mid, f) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Aperture at which the port-averaged correlation falls to mu (first crossing).
double width_for_mu(int n, double mu) {
  auto mu_at = [n](double w) { return std::sqrt(channel::port_correlation_raw(n, w) > 0.0
                                                    ? channel::port_correlation_raw(n, w)
                                                    : 0.0); };
  double lo = 0.0, hi = 1e-3;
  while (mu_at(hi) > mu) {
    lo = hi;
    hi *= 1.5;
  }
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mu_at(mid) > mu ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// J0 ascending series in 100-digit arithmetic.
double j0_reference(double x) {
  using big = boost::multiprecision::cpp_bin_float_100;
  const big q = big(x) * big(x) / 4;
  big term = 1, sum = 1;
  for (int k = 1; k < 400; ++k) {
    term *= -q / (big(k) * big(k));
    sum += term;
    if (abs(term) < big("1e-60")) break;
  }
  return static_cast<double>(sum);
}

// ---------------------------------------------------------------- 1 --

Outcome special_functions() {
  Outcome o;
  double marcum = 0.0;
  for (int m = 1; m <= 8; ++m) {
    for (int i = 0; i < 200; ++i) {
      const double b = 20.0 * i / 199.0;
      const double lhs = specfun::marcum_q(m, 0.0, b);
      const double rhs = 1.0 - specfun::reg_lower_gamma(m, 0.5 * b * b);
      marcum = std::max(marcum, std::abs(lhs - rhs));
    }
  }
  o.check(marcum <= 1e-10, "Q_m(0,b) = 1 - P(m, b^2/2): max err " + sci(marcum) + " (tol 1e-10)");

  double psi = 0.0, lng = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = 0.1 + (100.0 - 0.1) * i / 199.0;
    psi = std::max(psi, std::abs(specfun::digamma(x + 1.0) - specfun::digamma(x) - 1.0 / x));
    lng = std::max(lng, std::abs(specfun::ln_gamma(x + 1.0) - specfun::ln_gamma(x) - std::log(x)));
  }
  o.check(psi <= 1e-11, "psi(x+1) - psi(x) = 1/x: max err " + sci(psi) + " (tol 1e-11)");
  o.check(lng <= 1e-11, "lnG(x+1) - lnG(x) = ln x: max err " + sci(lng) + " (tol 1e-11)");

  double j0 = 0.0, j0_at = 0.0;
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(50.0 * i / 400.0);
  for (double x : {11.99, 12.0, 12.01, 15.99, 16.0, 16.01, 2.404825557695773, 5.520078110286311}) xs.push_back(x);
  for (double x : xs) {
    const double e = std::abs(specfun::bessel_j0(x) - j0_reference(x));
    if (e > j0) {
      j0 = e;
      j0_at = x;
    }
  }
  o.check(j0 <= 1e-12, "J0 vs 100-digit series on [0, 50]: max err " + sci(j0) + " at x=" + sci(j0_at, 6) +
                           " (tol 1e-12)");
  o.worst = std::max({marcum / 1e-10, psi / 1e-11, lng / 1e-11, j0 / 1e-12});
  return o;
}

// ---------------------------------------------------------------- 2 --

Outcome reductions() {
  Outcome o;
  double single = 0.0, indep = 0.0;
  for (int m = 1; m <= 3; ++m) {
    const FadingParams f{m, 1.0};
    const auto one = FasGeometry::from_width(1, 2.0);
    for (int i = 1; i <= 20; ++i) {
      const double x = marginal_quantile((i - 0.5) / 20.0, f);
      single = std::max(single, std::abs(selection::fas_max_cdf(x, one, f) - channel::marginal_envelope_cdf(x, f)));
    }
    for (int n : {2, 4, 8}) {
      const auto fas = FasGeometry::with_correlation(n, 0.0);
      double worst = 0.0;
      for (int i = 1; i <= 20; ++i) {
        // quantiles of the max of n independent envelopes
        const double x = marginal_quantile(std::pow((i - 0.5) / 20.0, 1.0 / n), f);
        const double expect = std::pow(channel::marginal_envelope_cdf(x, f), n);
        worst = std::max(worst, std::abs(selection::fas_max_cdf(x, fas, f) - expect));
      }
      indep = std::max(indep, worst);
      o.note("N=" + std::to_string(n) + " m=" + std::to_string(m) + " mu=0: max err " + sci(worst));
    }
  }
  o.check(single <= 1e-8, "N=1 vs marginal CDF: max err " + sci(single) + " (tol 1e-8)");
  o.check(indep <= 1e-6, "mu=0 vs marginal^N: max err " + sci(indep) + " (tol 1e-6)");
  o.worst = std::max(single / 1e-8, indep / 1e-6);
  return o;
}

// ---------------------------------------------------------------- 3 --

Outcome cdf_vs_mc(const ValidationOptions& opt) {
  Outcome o;
  const auto n_samples = opt.trials_large;
  double worst_z = 0.0;
  int config = 0;
  for (int n : {2, 4, 8}) {
    for (int m : {1, 2, 3}) {
      const double w95 = width_for_mu(n, 0.95);
      const FasGeometry geos[] = {FasGeometry::with_correlation(n, 0.3), FasGeometry::with_correlation(n, 0.7),
                                  FasGeometry::from_width(n, w95)};
      for (const auto& fas : geos) {
        rate::LinkModel link;
        link.fas = fas;
        link.fading = {m, 1.0};
        rate::McOptions mc;
        mc.trials = n_samples;
        mc.seed = opt.seed + static_cast<std::uint64_t>(config++);
        mc.workers = opt.workers;
        // reciprocal products are |h|^4, a monotone map of the selected envelope
        auto g = rate::sample_gain_products(link, mc);
        std::sort(g.begin(), g.end());
        const double nn = static_cast<double>(g.size());
        double cfg_z = 0.0;
        for (int i = 1; i <= 20; ++i) {
          const double p = (i - 0.5) / 20.0;
          const auto idx = static_cast<std::size_t>(std::ceil(p * nn)) - 1;
          const double x = std::sqrt(std::sqrt(g[idx]));
          const double emp =
              static_cast<double>(std::upper_bound(g.begin(), g.end(), g[idx]) - g.begin()) / nn;
          const double f = selection::fas_max_cdf(x, fas, link.fading);
          const double se = std::sqrt(std::max(f * (1.0 - f), 1e-300) / nn);
          cfg_z = std::max(cfg_z, std::abs(f - emp) / se);
        }
        worst_z = std::max(worst_z, cfg_z);
        o.check(cfg_z <= 4.0, "N=" + std::to_string(n) + " m=" + std::to_string(m) + " mu=" + sci(fas.mu(), 4) +
                                  ": max |F - F_emp| = " + sci(cfg_z) + " SE");
      }
    }
  }
  o.worst = worst_z / 4.0;
  return o;
}

// ---------------------------------------------------------------- 4 --

Outcome rayleigh_oracle() {
  Outcome o;
  boost::math::quadrature::exp_sinh<double> integrator;
  double worst = 0.0;
  for (double nu : {0.1, 1.0, 10.0, 1e3}) {
    rate::LinkModel link;
    link.nu = nu;
    link.alpha = 0.5;
    link.fas = FasGeometry::from_width(1, 0.0);
    link.fading = {1, 1.0};
    const double exact = rate::ergodic_rate_exact(link).rate;
    // |h|^2 = u ~ Exp(1); E ln(1 + nu u^2) integrated by parts.
    const double integral = integrator.integrate(
        [nu](double u) { return 2.0 * nu * u * std::exp(-u) / (1.0 + nu * u * u); }, 1e-14);
    const double oracle = 0.5 * integral / std::numbers::ln2;
    const double err = std::abs(exact - oracle);
    worst = std::max(worst, err);
    o.check(err <= 1e-4, "nu=" + sci(nu) + ": exact " + sci(exact, 10) + " oracle " + sci(oracle, 10) +
                             " err " + sci(err));
  }
  o.worst = worst / 1e-4;
  return o;
}

// ---------------------------------------------------------------- 5 --

Outcome exact_vs_mc(const ValidationOptions& opt) {
  Outcome o;
  double worst = 0.0;
  for (int n : {1, 4, 10}) {
    for (int m : {1, 2}) {
      const auto cfg = baseline(n, m);
      const double exact = rate::ergodic_rate_exact(cfg).rate;
      rate::McOptions mc;
      mc.trials = opt.trials_large;
      mc.seed = opt.seed;
      mc.workers = opt.workers;
      const auto est = rate::ergodic_rate_mc(cfg, mc);
      const double tol = std::max(0.02 * exact, 3.0 * est.std_error);
      const double diff = std::abs(exact - est.rate);
      worst = std::max(worst, diff / tol);
      o.check(diff <= tol, "N=" + std::to_string(n) + " m=" + std::to_string(m) + ": exact " + sci(exact, 8) +
                               " mc " + sci(est.rate, 8) + " +- " + sci(est.std_error, 2) + " diff " + sci(diff) +
                               " tol " + sci(tol));
    }
  }
  o.worst = worst;
  return o;
}

// ---------------------------------------------------------------- 6 --

Outcome asymptote_convergence(const ValidationOptions& opt) {
  Outcome o;
  for (int n : {1, 4}) {
    for (int m : {1, 2}) {
      std::vector<double> gaps;
      std::string line = "N=" + std::to_string(n) + " m=" + std::to_string(m) + ": gaps";
      for (double mult : {1.0, 10.0, 100.0, 1000.0}) {
        auto cfg = baseline(n, m);
        cfg.p_u *= mult;
        const auto link = rate::link_model(cfg);
        const double exact = rate::ergodic_rate_exact(link).rate;
        const double asym =
            rate::ergodic_rate_asymptotic(link, perturbed(link, Strategy::mgs, opt.a0_multiplier)).rate;
        gaps.push_back(std::abs(exact - asym) / exact);
        line += " " + sci(gaps.back());
      }
      bool monotone = true;
      for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] < gaps[i - 1];
      const bool below = gaps.back() < 0.01;
      o.worst = std::max(o.worst, gaps.back() / 0.01);
      o.check(monotone && below, line + (monotone ? "" : " (not decreasing)") + (below ? "" : " (last >= 1%)"));
    }
  }
  return o;
}

// ---------------------------------------------------------------- 7 --

Outcome mean_log_check(const ValidationOptions& opt) {
  Outcome o;
  {
    rate::LinkModel link;
    link.nu = 1.0;
    link.fas = FasGeometry::from_width(1, 0.0);
    link.fading = {1, 1.0};
    const double v = rate::mean_log_snr(link, perturbed(link, Strategy::mgs, opt.a0_multiplier));
    const double err = std::abs(v - (-2.0 * specfun::kEulerGamma));
    o.worst = std::max(o.worst, err / 1e-10);
    o.check(err <= 1e-10, "N=m=nu=1: " + sci(v, 16) + " vs -2 gamma_E, err " + sci(err) + " (tol 1e-10)");
  }
  for (int n : {2, 5}) {
    for (int m : {1, 2}) {
      rate::LinkModel link;
      link.nu = 1e4;
      link.fas = FasGeometry::from_width(n, 2.0);
      link.fading = {m, 1.0};
      const double model = rate::mean_log_snr(link, perturbed(link, Strategy::mgs, opt.a0_multiplier));
      rate::McOptions mc;
      mc.trials = opt.trials_large;
      mc.seed = opt.seed;
      mc.workers = opt.workers;
      const auto est = rate::mc_mean_log_snr(link, mc);
      const double z = std::abs(model - est.mean) / est.std_error;
      o.worst = std::max(o.worst, z / 3.0);
      o.check(z <= 3.0, "N=" + std::to_string(n) + " m=" + std::to_string(m) + " nu=1e4: model " + sci(model, 8) +
                            " mc " + sci(est.mean, 8) + " +- " + sci(est.std_error, 2) + " (" + sci(z) + " SE)");
    }
  }
  return o;
}

// ---------------------------------------------------------------- 8 --

Outcome trends(const ValidationOptions& opt) {
  Outcome o;
  const int ports[] = {10, 20, 40, 80, 160};
  const energy::PowerModel power{};
  auto scenario = [](int n, double w, double d, int m) {
    rate::ScenarioConfig cfg;
    cfg.geometry = channel::Geometry::vertical(d);
    cfg.fas = FasGeometry::from_width(n, w);
    cfg.fading.m = m;
    return cfg;
  };
  energy::OptimizeOptions mc_opt;
  mc_opt.method = rate::Method::monte_carlo;
  mc_opt.mc.trials = opt.trials_trend;
  mc_opt.mc.seed = opt.seed;
  mc_opt.mc.workers = opt.workers;
  energy::OptimizeOptions ex_opt;

  // (a) MGS against the random-selection baseline, Monte Carlo optimized.
  bool a_ok = true;
  for (int n : ports) {
    const auto cfg = scenario(n, 2.0, 25.0, 2);
    auto om = mc_opt;
    om.strategy = Strategy::mgs;
    auto orr = mc_opt;
    orr.strategy = Strategy::rs;
    const auto mgs = energy::optimize_alpha(cfg, power, om);
    const auto rs = energy::optimize_alpha(cfg, power, orr);
    const double se = std::hypot(mgs.rate_std_error, rs.rate_std_error) / mgs.p_total;
    const bool ok = mgs.zeta + 3.0 * se >= rs.zeta;
    a_ok = a_ok && ok;
    o.note("(a) N=" + std::to_string(n) + ": zeta mgs " + sci(mgs.zeta, 6) + " rs " + sci(rs.zeta, 6) +
           " (3 SE = " + sci(3.0 * se, 2) + ")");
  }
  o.check(a_ok, "(a) zeta_mgs >= zeta_rs at every N (within 3 SE)");

  // (b), (c), (d) on the exact rate.
  std::vector<energy::EfficiencyResult> wide, narrow;
  bool b_ok = true;
  for (int n : ports) {
    wide.push_back(energy::optimize_alpha(scenario(n, 2.0, 25.0, 2), power, ex_opt));
    narrow.push_back(energy::optimize_alpha(scenario(n, 0.2, 25.0, 2), power, ex_opt));
    const bool ok = wide.back().zeta >= narrow.back().zeta;
    b_ok = b_ok && ok;
    o.note("(b) N=" + std::to_string(n) + ": zeta W=2 " + sci(wide.back().zeta, 6) + " W=0.2 " +
           sci(narrow.back().zeta, 6));
  }
  o.check(b_ok, "(b) zeta(W=2) >= zeta(W=0.2) at every N");

  bool c_ok = true;
  std::string inc = "(c) zeta increments per doubling:";
  for (std::size_t i = 1; i < wide.size(); ++i) {
    const double dz = wide[i].zeta - wide[i - 1].zeta;
    inc += " " + sci(dz, 4);
    if (i >= 2) c_ok = c_ok && dz <= wide[i - 1].zeta - wide[i - 2].zeta;
  }
  o.check(c_ok, inc);

  bool d_ok = true;
  for (std::size_t i : {std::size_t{0}, std::size_t{4}}) {
    const auto far = energy::optimize_alpha(scenario(ports[i], 2.0, 50.0, 2), power, ex_opt);
    const bool ok = wide[i].alpha_star <= far.alpha_star + ex_opt.refine_tol;
    d_ok = d_ok && ok;
    o.note("(d) N=" + std::to_string(ports[i]) + ": alpha* d=25 " + sci(wide[i].alpha_star, 5) + " d=50 " +
           sci(far.alpha_star, 5));
  }
  o.check(d_ok, "(d) alpha*(d=25) <= alpha*(d=50)");

  // (e) fading severity at N=200.
  rate::McOptions mc;
  mc.trials = opt.trials_trend;
  mc.seed = opt.seed;
  mc.workers = opt.workers;
  const auto r1 = rate::ergodic_rate_mc(scenario(200, 2.0, 25.0, 1), mc);
  const auto r3 = rate::ergodic_rate_mc(scenario(200, 2.0, 25.0, 3), mc);
  const double sep = (r1.rate - r3.rate) / std::hypot(r1.std_error, r3.std_error);
  o.check(sep > 3.0, "(e) N=200 rate m=1 " + sci(r1.rate, 6) + " m=3 " + sci(r3.rate, 6) + " separation " +
                         sci(sep) + " SE (need > 3)");
  return o;
}

// ---------------------------------------------------------------- 9 --

Outcome determinism(const ValidationOptions& opt) {
  Outcome o;
  auto spec_for = [&](Command c) {
    ExperimentSpec s;
    s.trials = 20'000;
    s.seed = opt.seed;
    switch (c) {
      case Command::rate_vs_power:
        s.sweep_parameter = SweepParameter::p_u;
        s.sweep_values = {0.5, 1.0, 10.0};
        s.scenario.fas = FasGeometry::from_width(4, 2.0);
        break;
      case Command::rate_vs_alpha:
        s.sweep_parameter = SweepParameter::alpha;
        s.sweep_values = {0.1, 0.3, 0.5, 0.7, 0.9};
        s.scenario.fas = FasGeometry::from_width(4, 2.0);
        s.curves = {Curve{.d = 25.0}, Curve{.d = 50.0}};
        break;
      case Command::ee_vs_ports:
        s.sweep_parameter = SweepParameter::n_ports;
        s.sweep_values = {2, 4};
        s.optimize.method = rate::Method::monte_carlo;
        s.optimize.grid = 8;
        s.optimize.refine_tol = 0.01;
        break;
    }
    return s;
  };
  for (auto c : {Command::rate_vs_power, Command::rate_vs_alpha, Command::ee_vs_ports}) {
    const auto spec = spec_for(c);
    const auto a = run(c, spec, {.workers = 1}).to_csv();
    const auto b = run(c, spec, {.workers = 3}).to_csv();
    const auto again = run(c, spec, {.workers = 1}).to_csv();
    o.check(a == b && a == again,
            std::string(to_string(c)) + ": " + std::to_string(a.size()) + " bytes, reruns " +
                (a == b && a == again ? "identical" : "differ"));
  }
  return o;
}

struct Meta {
  const char* title;
  const char* tolerance;
  double budget;
};

Meta meta(int id) {
  switch (id) {
    case 1: return {"special functions", "marcum 1e-10, recurrences 1e-11, J0 1e-12", 5};
    case 2: return {"selected-envelope CDF reductions", "N=1 1e-8, mu=0 1e-6", 30};
    case 3: return {"selected-envelope CDF vs Monte Carlo", "4 SE at 20 quantiles", 300};
    case 4: return {"exact rate vs Rayleigh single-port oracle", "1e-4 bits/s/Hz", 10};
    case 5: return {"exact rate vs Monte Carlo", "max(2%, 3 SE)", 600};
    case 6: return {"high-SNR asymptote convergence", "gap decreasing, < 1% at x1000", 300};
    case 7: return {"mean log SNR", "3 SE; -2 gamma_E within 1e-10", 120};
    case 8: return {"simulation-section trends", "orderings (a)-(e)", 900};
    case 9: return {"determinism", "byte-identical CSV", 60};
    default: return {"unknown", "", 0};
  }
}

}  // namespace

CriterionReport run_criterion(int id, const ValidationOptions& opt) {
  CriterionReport r;
  r.id = id;
  const auto m = meta(id);
  r.title = m.title;
  r.tolerance = m.tolerance;
  r.budget_seconds = m.budget;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    switch (id) {
      case 1: o = special_functions(); break;
      case 2: o = reductions(); break;
      case 3: o = cdf_vs_mc(opt); break;
      case 4: o = rayleigh_oracle(); break;
      case 5: o = exact_vs_mc(opt); break;
      case 6: o = asymptote_convergence(opt); break;
      case 7: o = mean_log_check(opt); break;
      case 8: o = trends(opt); break;
      case 9: o = determinism(opt); break;
      default: o.check(false, "no such criterion");
    }
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_budget = r.seconds < r.budget_seconds;
  if (!in_budget) o.details.push_back("FAIL runtime " + sci(r.seconds) + " s over budget " + sci(r.budget_seconds) + " s");
  r.passed = o.ok && in_budget;
  r.details = std::move(o.details);
  std::size_t failed = 0;
  for (const auto& d : r.details) failed += d.rfind("FAIL", 0) == 0;
  std::size_t checks = 0;
  for (const auto& d : r.details) checks += d.rfind("FAIL", 0) == 0 || d.rfind("ok", 0) == 0;
  r.measured = std::to_string(checks - failed) + "/" + std::to_string(checks) + " checks";
  if (o.worst > 0.0) r.measured += ", worst/tol " + sci(o.worst);
  return r;
}

std::vector<CriterionReport> run_validation(const ValidationOptions& opt,
                                            const std::function<void(const CriterionReport&)>& on_done) {
  std::vector<CriterionReport> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    out.push_back(run_criterion(id, opt));
    if (on_done) on_done(out.back());
  }
  return out;
}

std::string summary_line(const CriterionReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s  criterion %d  %-42s measured: %s | tolerance: %s | %.1f s (budget %.0f s)",
                r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.measured.c_str(), r.tolerance.c_str(),
                r.seconds, r.budget_seconds);
  return buf;
}

std::string format_report(const CriterionReport& r) {
  std::string s = summary_line(r) + "\n";
  for (const auto& d : r.details) s += "      " + d + "\n";
  return s;
}

}  // namespace fasuav::cli
