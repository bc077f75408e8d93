#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fasuav/quadrature.hpp"

using namespace fasuav::quadrature;

TEST_SUITE("quadrature") {

TEST_CASE("degree 13 is exact for both rules, so one panel suffices") {
  auto r = integrate([](double x) { return std::pow(x, 13); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 14.0).epsilon(1e-15));
  CHECK(r.evaluations == 15);
  auto hi = integrate([](double x) { return std::pow(x, 22); }, 0.0, 1.0, {.abs_tol = 1e-15, .rel_tol = 1e-14});
  CHECK(hi.value == doctest::Approx(1.0 / 23.0).epsilon(1e-14));
}

TEST_CASE("smooth and peaked integrands") {
  auto r = integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0, {.abs_tol = 1e-14, .rel_tol = 1e-13});
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));

  // narrow Lorentzian: needs real adaptivity
  const double eps = 1e-4;
  auto p = integrate([eps](double x) { return eps / (x * x + eps * eps); }, -1.0, 1.0,
                     {.abs_tol = 1e-12, .rel_tol = 1e-11});
  CHECK(p.converged);
  CHECK(p.value == doctest::Approx(2.0 * std::atan(1.0 / eps)).epsilon(1e-10));
}

TEST_CASE("integrable endpoint singularity") {
  auto r = integrate([](double x) { return x > 0 ? 1.0 / std::sqrt(x) : 0.0; }, 0.0, 1.0,
                     {.abs_tol = 1e-10, .rel_tol = 1e-10, .max_subdivisions = 10000});
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("breakpoints split a kink") {
  const std::vector<double> pts = {-1.0, 0.3, 2.0};
  auto f = [](double x) { return std::abs(x - 0.3); };
  auto r = integrate(f, std::span<const double>(pts));
  CHECK(r.evaluations == 30);
  CHECK(r.value == doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7).epsilon(1e-14));
}

TEST_CASE("empty and degenerate ranges") {
  auto r = integrate([](double) { return 1.0; }, 2.0, 2.0);
  CHECK(r.value == 0.0);
  CHECK(r.converged);
}

TEST_CASE("subdivision budget is reported as non-convergence") {
  auto r = integrate([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0,
                     {.abs_tol = 1e-15, .rel_tol = 1e-15, .max_subdivisions = 5});
  CHECK_FALSE(r.converged);
  CHECK(r.error > 0.0);
}

}  // TEST_SUITE
