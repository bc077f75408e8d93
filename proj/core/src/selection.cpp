#include "fasuav/selection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fasuav/errors.hpp"
#include "fasuav/quadrature.hpp"

namespace fasuav::selection {

std::string_view to_string(Strategy s) { return s == Strategy::mgs ? "mgs" : "rs"; }

Strategy strategy_from_string(std::string_view name) {
  if (name == "mgs") return Strategy::mgs;
  if (name == "rs") return Strategy::rs;
  throw DomainError("unknown selection strategy '" + std::string(name) + "'");
}

SelectionOutcome select_mgs(std::span<const double> envelopes) {
  if (envelopes.empty()) throw DomainError("select_mgs: empty sample");
  std::size_t best = 0;
  for (std::size_t k = 1; k < envelopes.size(); ++k) {
    if (envelopes[k] > envelopes[best]) best = k;
  }
  return {best, envelopes[best]};
}

SelectionOutcome select_rs(std::span<const double> envelopes, RandomStream& rng) {
  if (envelopes.empty()) throw DomainError("select_rs: empty sample");
  const std::size_t k = envelopes.size() == 1 ? 0 : rng.uniform_index(envelopes.size());
  return {k, envelopes[k]};
}

SelectionOutcome select(Strategy strategy, std::span<const double> envelopes, RandomStream& rng) {
  return strategy == Strategy::mgs ? select_mgs(envelopes) : select_rs(envelopes, rng);
}

double fas_max_cdf(double x, const channel::FasGeometry& fas, const channel::FadingParams& fading,
                   const specfun::Tolerance& tol) {
  fading.validate();
  tol.validate();
  if (!(x >= 0.0) || std::isnan(x)) throw DomainError("fas_max_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (fas.mu() >= 1.0) return channel::marginal_envelope_cdf(x, fading);

  const int m = fading.m;
  const double s2 = fading.sigma_sq;
  const int others = fas.n_ports() - 1;
  const double one_minus = 1.0 - fas.mu_sq();
  const double a_coef = std::sqrt(2.0 * m * fas.mu_sq() / (s2 * one_minus));
  const double b_arg = std::sqrt(2.0 * m * x * x / (s2 * one_minus));
  const double log_norm = std::log(2.0) + m * std::log(static_cast<double>(m)) -
                          specfun::ln_gamma(m) - m * std::log(s2);
  const specfun::Tolerance marcum_tol{.abs_tol = 1e-14, .rel_tol = 1e-12, .max_terms = 1'000'000};

  auto integrand = [&](double r) -> double {
    if (r <= 0.0) return 0.0;
    const double log_pdf = log_norm + (2.0 * m - 1.0) * std::log(r) - m * r * r / s2;
    if (others == 0) return std::exp(log_pdf);
    const double cond = specfun::marcum_q_complement(m, a_coef * r, b_arg, marcum_tol);
    if (cond <= 0.0) return 0.0;
    if (others > 64) return std::exp(log_pdf + others * std::log(cond));
    return std::exp(log_pdf) * std::pow(cond, others);
  };

  const quadrature::Options opt{.abs_tol = tol.abs_tol,
                                .rel_tol = tol.rel_tol,
                                .max_subdivisions = static_cast<int>(std::min<long>(tol.max_terms, 1'000'000))};
  const auto res = quadrature::integrate(integrand, 0.0, x, opt);
  if (!res.converged) {
    throw NumericError("fas_max_cdf: quadrature did not converge at x=" + std::to_string(x));
  }
  return std::clamp(res.value, 0.0, 1.0);
}

}  // namespace fasuav::selection
