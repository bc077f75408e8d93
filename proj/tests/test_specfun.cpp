#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "fasuav/errors.hpp"
#include "fasuav/random.hpp"
#include "fasuav/specfun.hpp"

using namespace fasuav;
using namespace fasuav::specfun;

namespace {

// Q_m(a, b) as the survival of a noncentral chi-square with 2m dof.
double marcum_oracle(int m, double a, double b) {
  if (b == 0.0) return 1.0;
  if (a == 0.0) return boost::math::gamma_q(static_cast<double>(m), 0.5 * b * b);
  boost::math::non_central_chi_squared_distribution<double> d(2.0 * m, a * a);
  return boost::math::cdf(boost::math::complement(d, b * b));
}

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("tolerance validation") {
  CHECK_NOTHROW(Tolerance{}.validate());
  CHECK_THROWS_AS((Tolerance{.abs_tol = 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((Tolerance{.rel_tol = -1.0}.validate()), DomainError);
  CHECK_THROWS_AS((Tolerance{.max_terms = 0}.validate()), DomainError);
}

TEST_CASE("bessel_j0 examples") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-15));
  CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-10);
  CHECK(bessel_j0(-3.0) == bessel_j0(3.0));
  CHECK_THROWS_AS(bessel_j0(std::nan("")), DomainError);
  CHECK_THROWS_AS(bessel_j0(INFINITY), DomainError);
}

TEST_CASE("bessel_j0 against boost on both sides of the series switch") {
  double worst = 0.0;
  for (double x = 0.0; x <= 60.0; x += 0.0625) {
    worst = std::max(worst, std::abs(bessel_j0(x) - boost::math::cyl_bessel_j(0, x)));
  }
  for (double x : {100.0, 517.3, 1000.0, 4321.5, 1e4}) {
    worst = std::max(worst, std::abs(bessel_j0(x) - boost::math::cyl_bessel_j(0, x)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("bessel_j0 alternates sign across its first five roots") {
  const double roots[] = {2.404825557695773, 5.520078110286311, 8.653727912911012, 11.79153443901428,
                          14.93091770848779};
  for (int k = 0; k < 5; ++k) {
    const double before = bessel_j0(roots[k] - 1e-3);
    const double after = bessel_j0(roots[k] + 1e-3);
    CHECK(before * after < 0.0);
    CHECK(std::abs(bessel_j0(roots[k])) < 1e-12);
    // sign pattern + - + - + before each root
    CHECK((before > 0) == (k % 2 == 0));
  }
}

TEST_CASE("ln_gamma examples and oracle") {
  CHECK(ln_gamma(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(ln_gamma(2.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(ln_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  for (double x : {1e-8, 0.01, 0.3, 1.5, 3.7, 9.99, 10.01, 42.5, 170.0, 1e4, 1e7}) {
    CAPTURE(x);
    const double expect = boost::math::lgamma(x);
    CHECK(std::abs(ln_gamma(x) - expect) <= 1e-13 * std::max(1.0, std::abs(expect)));
  }
  CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
  CHECK_THROWS_AS(ln_gamma(-1.5), DomainError);
}

TEST_CASE("ln_gamma and digamma recurrences") {
  for (int i = 0; i < 200; ++i) {
    const double x = 0.1 + 99.9 * i / 199.0;
    CAPTURE(x);
    CHECK(std::abs(ln_gamma(x + 1.0) - ln_gamma(x) - std::log(x)) < 1e-11);
    CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-11);
  }
}

TEST_CASE("digamma examples and oracle") {
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-15));
  CHECK(digamma(2.0) == doctest::Approx(1.0 - 0.5772156649015329).epsilon(1e-15));
  CHECK(digamma(10.0) == doctest::Approx(2.2517525890667211).epsilon(1e-14));
  for (double x : {1e-6, 0.05, 0.5, 1.4616321449683623, 7.25, 33.0, 500.0, 1e6}) {
    CAPTURE(x);
    CHECK(std::abs(digamma(x) - boost::math::digamma(x)) <= 1e-12 * std::max(1.0, std::abs(digamma(x))));
  }
  CHECK_THROWS_AS(digamma(0.0), DomainError);
}

TEST_CASE("reg_lower_gamma examples and oracle") {
  CHECK(reg_lower_gamma(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(reg_lower_gamma(2.5, 0.0) == 0.0);
  CHECK(reg_lower_gamma(3.0, 3.0) == doctest::Approx(1.0 - 8.5 * std::exp(-3.0)).epsilon(1e-14));
  for (double s : {0.25, 1.0, 2.0, 7.5, 30.0, 161.0, 640.0}) {
    for (double x : {1e-3, 0.5, 2.0, 10.0, 29.0, 150.0, 700.0}) {
      CAPTURE(s);
      CAPTURE(x);
      CHECK(std::abs(reg_lower_gamma(s, x) - boost::math::gamma_p(s, x)) < 1e-12);
      CHECK(std::abs(reg_upper_gamma(s, x) - boost::math::gamma_q(s, x)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(reg_lower_gamma(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(reg_lower_gamma(1.0, -1.0), DomainError);
}

TEST_CASE("reg_upper_gamma keeps relative accuracy in the far tail") {
  const double q = reg_upper_gamma(2.0, 60.0);  // 61 e^-60
  CHECK(q == doctest::Approx(61.0 * std::exp(-60.0)).epsilon(1e-12));
}

TEST_CASE("reg_lower_gamma is monotone in x and bounded") {
  for (double s : {0.5, 3.0, 20.0}) {
    double prev = 0.0;
    for (double x = 0.0; x < 80.0; x += 0.37) {
      const double p = reg_lower_gamma(s, x);
      CHECK(p >= prev);
      CHECK(p <= 1.0);
      prev = p;
    }
  }
}

TEST_CASE("marcum_q examples") {
  CHECK(marcum_q(1, 0.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  for (int m : {1, 2, 5}) {
    for (double a : {0.0, 0.7, 12.0}) CHECK(marcum_q(m, a, 0.0) == 1.0);
  }
  CHECK(marcum_q(2, 1.0, 1.0) == doctest::Approx(marcum_oracle(2, 1.0, 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(marcum_q(1.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(marcum_q(0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(marcum_q(1, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(marcum_q(1, 1.0, INFINITY), DomainError);
}

TEST_CASE("marcum_q against the noncentral chi-square survival") {
  double worst = 0.0;
  for (int m : {1, 2, 3, 8}) {
    for (double a : {0.0, 0.3, 1.0, 4.0, 10.0, 25.0}) {
      for (double b : {0.1, 0.9, 2.5, 6.0, 11.0, 27.0}) {
        const double q = marcum_q(m, a, b);
        const double c = marcum_q_complement(m, a, b);
        worst = std::max(worst, std::abs(q - marcum_oracle(m, a, b)));
        CHECK(q + c == doctest::Approx(1.0).epsilon(1e-13));
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("marcum_q = 1 - P(m, b^2/2) at a = 0") {
  for (int m = 1; m <= 8; ++m) {
    for (int i = 0; i < 200; ++i) {
      const double b = 20.0 * i / 199.0;
      CHECK(std::abs(marcum_q(m, 0.0, b) - (1.0 - reg_lower_gamma(m, 0.5 * b * b))) < 1e-10);
    }
  }
}

TEST_CASE("marcum_q monotonicity") {
  for (int m : {1, 3}) {
    double prev = 1.0;
    for (double b = 0.0; b < 12.0; b += 0.1) {
      const double q = marcum_q(m, 2.0, b);
      CHECK(q <= prev + 1e-14);
      CHECK(q >= 0.0);
      prev = q;
    }
    prev = 0.0;
    for (double a = 0.0; a < 12.0; a += 0.1) {
      const double q = marcum_q(m, a, 3.0);
      CHECK(q >= prev - 1e-14);
      CHECK(q <= 1.0);
      prev = q;
    }
  }
}

TEST_CASE("marcum_q complement keeps relative accuracy near Q = 1") {
  // 1 - Q_1(0, b) = 1 - exp(-b^2/2) for tiny b
  const double b = 1e-5;
  CHECK(marcum_q_complement(1, 0.0, b) == doctest::Approx(-std::expm1(-0.5 * b * b)).epsilon(1e-12));
}

TEST_CASE("marcum_q(2, 1, 1) within 3 SE of a simulated noncentral chi-square") {
  // |CN(a, 1)|^2 plus 2(m-1) central half-Gaussian powers, all halved by the
  // N(0, 1/2) parametrisation: Q = P(2 * sum > b^2).
  RandomStream rng(99, 0);
  const int n = 10'000'000;
  const double a = 1.0, b = 1.0;
  long hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.half_gaussian() * std::sqrt(2.0) + a;
    const double y = rng.half_gaussian() * std::sqrt(2.0);
    const double u = rng.half_gaussian() * std::sqrt(2.0);
    const double v = rng.half_gaussian() * std::sqrt(2.0);
    hits += (x * x + y * y + u * u + v * v) > b * b;
  }
  const double p = static_cast<double>(hits) / n;
  const double se = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(marcum_q(2, a, b) - p) < 3.0 * se);
}

TEST_CASE("marcum_q reports exhausted term budgets") {
  CHECK_THROWS_AS(marcum_q(1, 40.0, 40.0, Tolerance{.abs_tol = 1e-14, .rel_tol = 1e-10, .max_terms = 3}),
                  NumericError);
}

}  // TEST_SUITE
