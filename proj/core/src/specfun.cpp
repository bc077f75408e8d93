#include "fasuav/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fasuav/errors.hpp"

namespace fasuav::specfun {
namespace {

using ld = long double;

constexpr int kMaxIncGammaIter = 100'000;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) throw DomainError(std::string(fn) + ": argument must be finite");
}

// Stirling series for ln Gamma(z), z >= 10.
ld stirling_ln_gamma(ld z) {
  // B_{2k} / (2k (2k - 1))
  static constexpr ld kCoeff[] = {
      1.0L / 12.0L,          -1.0L / 360.0L,         1.0L / 1260.0L,
      -1.0L / 1680.0L,       1.0L / 1188.0L,         -691.0L / 360360.0L,
      1.0L / 156.0L,         -3617.0L / 122400.0L,   43867.0L / 244188.0L,
  };
  const ld inv = 1.0L / z;
  const ld inv2 = inv * inv;
  ld series = 0.0L;
  ld pw = inv;
  for (ld c : kCoeff) {
    series += c * pw;
    pw *= inv2;
  }
  return (z - 0.5L) * std::log(z) - z + 0.5L * std::log(2.0L * std::numbers::pi_v<ld>) + series;
}

ld ln_gamma_ld(ld x) {
  if (x >= 10.0L) return stirling_ln_gamma(x);
  ld prod = 1.0L;
  ld z = x;
  while (z < 10.0L) {
    prod *= z;
    z += 1.0L;
  }
  return stirling_ln_gamma(z) - std::log(prod);
}

// e^{-x} x^s / Gamma(s + shift), in extended precision.
ld gamma_prefactor(ld s, ld x, ld shift) {
  return std::exp(s * std::log(x) - x - ln_gamma_ld(s + shift));
}

// sum_{n>=0} x^n / ((s+1)...(s+n)), valid for x < s + 1.
ld lower_series(ld s, ld x) {
  ld ap = s;
  ld del = 1.0L;
  ld sum = 1.0L;
  for (int n = 0; n < kMaxIncGammaIter; ++n) {
    ap += 1.0L;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-19L) return sum;
  }
  throw NumericError("reg_lower_gamma: series did not converge");
}

// Modified Lentz continued fraction for Q(s, x) / (e^{-x} x^s / Gamma(s)), x >= s + 1.
ld upper_fraction(ld s, ld x) {
  constexpr ld tiny = std::numeric_limits<ld>::min() / std::numeric_limits<ld>::epsilon();
  ld b = x + 1.0L - s;
  ld c = 1.0L / tiny;
  ld d = 1.0L / b;
  ld h = d;
  for (int i = 1; i < kMaxIncGammaIter; ++i) {
    const ld an = -static_cast<ld>(i) * (static_cast<ld>(i) - s);
    b += 2.0L;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const ld del = d * c;
    h *= del;
    if (std::fabs(del - 1.0L) < 1e-19L) return h;
  }
  throw NumericError("reg_upper_gamma: continued fraction did not converge");
}

void check_inc_gamma_args(double s, double x, const char* fn) {
  if (!(s > 0.0) || !std::isfinite(s) || std::isnan(x) || x < 0.0) {
    throw DomainError(std::string(fn) + ": requires s > 0 finite and x >= 0");
  }
}

int check_marcum_args(double order, double a, double b) {
  if (!std::isfinite(order) || order < 1.0 || order != std::floor(order) || order > 1e6) {
    throw DomainError("marcum_q: order must be a positive integer");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
    throw DomainError("marcum_q: arguments must be finite and nonnegative");
  }
  return static_cast<int>(order);
}

// Index window [lo, hi] of the Poisson(lambda) weights holding all but
// `budget` of the mass, split evenly between the two tails.
struct PoissonWindow {
  long lo;
  long hi;
};

PoissonWindow poisson_window(ld lambda, double budget, long max_terms) {
  const long mode = static_cast<long>(std::floor(lambda));
  const ld log_lambda = std::log(lambda);
  const ld log_w_mode = -lambda + static_cast<ld>(mode) * log_lambda - ln_gamma_ld(mode + 1.0L);
  const ld half = 0.5L * budget;

  // Upper tail beyond k is bounded by w_{k+1} / (1 - lambda / (k + 2)).
  long hi = mode;
  ld log_w = log_w_mode;
  for (;;) {
    const ld log_w_next = log_w + log_lambda - std::log(static_cast<ld>(hi + 1));
    const ld ratio = lambda / static_cast<ld>(hi + 2);
    if (ratio < 1.0L && std::exp(log_w_next) / (1.0L - ratio) < half) break;
    log_w = log_w_next;
    ++hi;
    if (hi - mode > max_terms) throw NumericError("marcum_q: Poisson tail exceeded max_terms");
  }

  // Lower tail below k is bounded by w_{k-1} / (1 - (k - 1) / lambda).
  long lo = mode;
  log_w = log_w_mode;
  while (lo > 0) {
    const ld log_w_prev = log_w - log_lambda + std::log(static_cast<ld>(lo));
    const ld ratio = static_cast<ld>(lo - 1) / lambda;
    if (ratio < 1.0L && std::exp(log_w_prev) / (1.0L - ratio) < half) break;
    log_w = log_w_prev;
    --lo;
  }
  if (hi - lo + 1 > max_terms) throw NumericError("marcum_q: series exceeded max_terms");
  return {lo, hi};
}

ld log_poisson(ld lambda, long k) {
  return -lambda + static_cast<ld>(k) * std::log(lambda) - ln_gamma_ld(static_cast<ld>(k) + 1.0L);
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_terms < 1) {
    throw DomainError("Tolerance: abs_tol > 0, rel_tol > 0 and max_terms >= 1 required");
  }
}

double bessel_j0(double x) {
  require_finite(x, "bessel_j0");
  const ld ax = std::fabs(static_cast<ld>(x));
  if (ax <= 16.0L) {
    const ld q = 0.25L * ax * ax;
    ld term = 1.0L;
    ld sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
      term *= -q / (static_cast<ld>(k) * k);
      sum += term;
      if (static_cast<ld>(k) > q && std::fabs(term) < 1e-21L) break;
    }
    return static_cast<double>(sum);
  }

  // Hankel expansion: J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4.
  const ld eight_x = 8.0L * ax;
  ld p = 1.0L;
  ld q = 0.0L;
  ld a = 1.0L;
  ld last = std::numeric_limits<ld>::infinity();
  for (int k = 1; k < 60; ++k) {
    const ld odd = 2.0L * k - 1.0L;
    const ld next = a * (-(odd * odd)) / (static_cast<ld>(k) * eight_x);
    if (std::fabs(next) >= last) break;  // asymptotic series starts diverging
    last = std::fabs(next);
    a = next;
    // a_k enters P for even k with sign (-1)^{k/2}, Q for odd k with (-1)^{(k-1)/2}.
    const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 0) {
      p += sign * a;
    } else {
      q += sign * a;
    }
    if (last < 1e-20L) break;
  }
  const double xd = static_cast<double>(ax);
  const ld c = std::cos(xd);
  const ld s = std::sin(xd);
  const ld cos_chi = (c + s) / std::numbers::sqrt2_v<ld>;
  const ld sin_chi = (s - c) / std::numbers::sqrt2_v<ld>;
  const ld amp = std::sqrt(2.0L / (std::numbers::pi_v<ld> * ax));
  return static_cast<double>(amp * (p * cos_chi - q * sin_chi));
}

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("ln_gamma: requires finite x > 0");
  return static_cast<double>(ln_gamma_ld(x));
}

double reg_lower_gamma(double s, double x) {
  check_inc_gamma_args(s, x, "reg_lower_gamma");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const ld sl = s;
  const ld xl = x;
  if (xl < sl + 1.0L) {
    const ld v = gamma_prefactor(sl, xl, 1.0L) * lower_series(sl, xl);
    return static_cast<double>(std::fmin(v, 1.0L));
  }
  const ld upper = gamma_prefactor(sl, xl, 0.0L) * upper_fraction(sl, xl);
  return static_cast<double>(std::fmax(1.0L - upper, 0.0L));
}

double reg_upper_gamma(double s, double x) {
  check_inc_gamma_args(s, x, "reg_upper_gamma");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const ld sl = s;
  const ld xl = x;
  if (xl < sl + 1.0L) {
    const ld lower = gamma_prefactor(sl, xl, 1.0L) * lower_series(sl, xl);
    return static_cast<double>(std::fmax(1.0L - lower, 0.0L));
  }
  const ld v = gamma_prefactor(sl, xl, 0.0L) * upper_fraction(sl, xl);
  return static_cast<double>(std::fmin(v, 1.0L));
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma: requires finite x > 0");
  ld z = x;
  ld shift = 0.0L;
  while (z < 10.0L) {
    shift += 1.0L / z;
    z += 1.0L;
  }
  // psi(z) ~ ln z - 1/(2z) - sum B_{2k} / (2k z^{2k})
  static constexpr ld kCoeff[] = {
      1.0L / 12.0L,  -1.0L / 120.0L,       1.0L / 252.0L, -1.0L / 240.0L,
      1.0L / 132.0L, -691.0L / 32760.0L,   1.0L / 12.0L,
  };
  const ld inv2 = 1.0L / (z * z);
  ld pw = inv2;
  ld series = 0.0L;
  for (ld c : kCoeff) {
    series += c * pw;
    pw *= inv2;
  }
  return static_cast<double>(std::log(z) - 0.5L / z - series - shift);
}

double marcum_q(double order, double a, double b, const Tolerance& tol) {
  const int m = check_marcum_args(order, a, b);
  tol.validate();
  if (b == 0.0) return 1.0;
  const ld y = 0.5L * static_cast<ld>(b) * b;
  const ld lambda = 0.5L * static_cast<ld>(a) * a;
  if (lambda == 0.0L) return reg_upper_gamma(m, static_cast<double>(y));

  const auto [lo, hi] = poisson_window(lambda, tol.abs_tol, tol.max_terms);
  // Q(s+1, y) = Q(s, y) + e^{-y} y^s / Gamma(s+1): additive upward recurrence.
  ld s = static_cast<ld>(m + lo);
  ld upper = reg_upper_gamma(static_cast<double>(s), static_cast<double>(y));
  ld log_term = s * std::log(y) - y - ln_gamma_ld(s + 1.0L);
  ld weight = std::exp(log_poisson(lambda, lo));
  ld sum = 0.0L;
  for (long k = lo; k <= hi; ++k) {
    sum += weight * upper;
    upper += std::exp(log_term);
    s += 1.0L;
    log_term += std::log(y) - std::log(s);
    weight *= lambda / static_cast<ld>(k + 1);
  }
  return static_cast<double>(std::clamp(sum, 0.0L, 1.0L));
}

double marcum_q_complement(double order, double a, double b, const Tolerance& tol) {
  const int m = check_marcum_args(order, a, b);
  tol.validate();
  if (b == 0.0) return 0.0;
  const ld y = 0.5L * static_cast<ld>(b) * b;
  const ld lambda = 0.5L * static_cast<ld>(a) * a;
  if (lambda == 0.0L) return reg_lower_gamma(m, static_cast<double>(y));

  const auto [lo, hi] = poisson_window(lambda, tol.abs_tol, tol.max_terms);
  // P(s-1, y) = P(s, y) + e^{-y} y^{s-1} / Gamma(s): additive downward recurrence.
  ld s = static_cast<ld>(m + hi);
  ld lower = reg_lower_gamma(static_cast<double>(s), static_cast<double>(y));
  ld weight = std::exp(log_poisson(lambda, hi));
  // log of e^{-y} y^{s-1} / Gamma(s)
  ld log_term = (s - 1.0L) * std::log(y) - y - ln_gamma_ld(s);
  ld sum = 0.0L;
  for (long k = hi; k >= lo; --k) {
    sum += weight * lower;
    lower += std::exp(log_term);
    s -= 1.0L;
    log_term += std::log(s) - std::log(y);
    weight *= static_cast<ld>(k) / lambda;
  }
  return static_cast<double>(std::clamp(sum, 0.0L, 1.0L));
}

}  // namespace fasuav::specfun
