#pragma once

// Special functions used by the correlation model, the selected-port CDF and
// the high-SNR asymptote. All functions are pure and reentrant.

namespace fasuav::specfun {

/// Convergence controls for series-based evaluations.
struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  long max_terms = 1'000'000;

  /// Throws DomainError unless abs_tol > 0, rel_tol > 0 and max_terms >= 1.
  void validate() const;
};

inline constexpr double kEulerGamma = 0.57721566490156628606;

/// Bessel function of the first kind, order zero.
/// Ascending series (extended precision) for |x| <= 16, Hankel asymptotic
/// expansion beyond. Absolute error below 1e-12 on |x| <= 1e4.
double bessel_j0(double x);

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double reg_lower_gamma(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), evaluated
/// directly so that small tails keep their relative accuracy.
double reg_upper_gamma(double s, double x);

/// Digamma psi(x) for x > 0.
double digamma(double x);

/// Generalized Marcum Q-function Q_m(a, b) of positive integer order m.
///
/// Evaluated as the Poisson mixture
///   Q_m(a, b) = sum_k e^{-a^2/2} (a^2/2)^k / k! * Q(m + k, b^2/2)
/// truncated on both sides of the Poisson mode once the discarded weight is
/// below `tol.abs_tol`. Throws DomainError for a non-integer or non-positive
/// order and NumericError if more than `tol.max_terms` terms are needed.
double marcum_q(double order, double a, double b, const Tolerance& tol = {.abs_tol = 1e-14});

/// 1 - Q_m(a, b), i.e. the noncentral chi-square CDF at b^2 with 2m degrees
/// of freedom and noncentrality a^2. Summed directly (no subtraction from one)
/// so it stays accurate when Q_m is close to 1.
double marcum_q_complement(double order, double a, double b,
                           const Tolerance& tol = {.abs_tol = 1e-14});

}  // namespace fasuav::specfun
