#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>

#include "doctest.h"
#include "fasuav/channel.hpp"
#include "fasuav/errors.hpp"
#include "fasuav/selection.hpp"
#include "fasuav/specfun.hpp"

using namespace fasuav;
using namespace fasuav::selection;
using channel::FadingParams;
using channel::FasGeometry;

namespace {

// Independent oracle for the selected-envelope CDF: Boost's noncentral
// chi-square CDF inside a composite Simpson rule on [0, x].
double max_cdf_oracle(double x, int n, int m, double mu) {
  const double s = 1.0 - mu * mu;
  const int panels = 4000;
  const double h = x / panels;
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double pdf = 2.0 * std::pow(m, m) / std::tgamma(m) * std::pow(r, 2 * m - 1) * std::exp(-m * r * r);
    // conditional CDF of a correlated port given the reference envelope r
    boost::math::non_central_chi_squared_distribution<double> d(2.0 * m, 2.0 * m * mu * mu * r * r / s);
    const double c = boost::math::cdf(d, 2.0 * m * x * x / s);
    return pdf * std::pow(c, n - 1);
  };
  double sum = f(0.0) + f(x);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

std::vector<double> mgs_samples(const FasGeometry& fas, const FadingParams& f, int n, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  std::vector<double> env(fas.n_ports()), out(n);
  for (auto& v : out) {
    channel::sample_envelopes(fas, f, rng, env);
    v = select_mgs(env).envelope;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("strategy names") {
  CHECK(to_string(Strategy::mgs) == "mgs");
  CHECK(strategy_from_string("rs") == Strategy::rs);
  CHECK_THROWS_AS(strategy_from_string("best"), DomainError);
}

TEST_CASE("select_mgs examples") {
  const std::vector<double> a{0.2, 0.9, 0.4};
  CHECK(select_mgs(a).port_index == 1);
  CHECK(select_mgs(a).envelope == 0.9);
  const std::vector<double> one{0.7};
  CHECK(select_mgs(one).port_index == 0);
  const std::vector<double> tie{0.5, 0.9, 0.9};
  CHECK(select_mgs(tie).port_index == 1);
  CHECK_THROWS_AS(select_mgs(std::vector<double>{}), DomainError);
}

TEST_CASE("select_rs examples") {
  RandomStream rng(1, 0);
  const std::vector<double> one{0.3};
  for (int i = 0; i < 10; ++i) CHECK(select_rs(one, rng).port_index == 0);
  CHECK_THROWS_AS(select_rs(std::vector<double>{}, rng), DomainError);
}

TEST_CASE("select_rs is uniform over 10^6 draws") {
  RandomStream rng(17, 0);
  const std::vector<double> env{0.1, 0.2, 0.3, 0.4};
  std::vector<long> counts(4, 0);
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const auto o = select_rs(env, rng);
    CHECK(o.envelope == env[o.port_index]);
    ++counts[o.port_index];
  }
  const double se = std::sqrt(0.25 * 0.75 / n);
  for (long c : counts) CHECK(std::abs(static_cast<double>(c) / n - 0.25) < 3.0 * se);
}

TEST_CASE("select_rs replays identically for a fixed seed") {
  const std::vector<double> env{1, 2, 3, 4, 5, 6, 7};
  RandomStream a(8, 2), b(8, 2);
  for (int i = 0; i < 1000; ++i) CHECK(select_rs(env, a).port_index == select_rs(env, b).port_index);
}

TEST_CASE("MGS dominates RS and is scale invariant") {
  RandomStream rng(4, 0), pick(4, 1);
  std::vector<double> env(6);
  for (int i = 0; i < 2000; ++i) {
    channel::sample_envelopes(FasGeometry::with_correlation(6, 0.4), {2, 1.0}, rng, env);
    const auto best = select_mgs(env);
    CHECK(best.envelope >= select(Strategy::rs, env, pick).envelope);
    auto scaled = env;
    for (auto& e : scaled) e *= 3.7;
    CHECK(select_mgs(scaled).port_index == best.port_index);
  }
}

TEST_CASE("fas_max_cdf edge cases") {
  const FadingParams f{2, 1.0};
  CHECK(fas_max_cdf(0.0, FasGeometry::with_correlation(4, 0.5), f) == 0.0);
  CHECK(fas_max_cdf(INFINITY, FasGeometry::with_correlation(4, 0.5), f) == 1.0);
  CHECK_THROWS_AS(fas_max_cdf(-1.0, FasGeometry::with_correlation(4, 0.5), f), DomainError);
  for (double x : {0.3, 1.0, 2.2}) {
    CHECK(fas_max_cdf(x, FasGeometry::with_correlation(5, 1.0), f) == channel::marginal_envelope_cdf(x, f));
  }
}

TEST_CASE("fas_max_cdf reduces to the marginal for one port") {
  for (int m : {1, 2, 3}) {
    const FadingParams f{m, 1.3};
    for (double x = 0.05; x < 3.5; x += 0.15) {
      CHECK(std::abs(fas_max_cdf(x, FasGeometry::from_width(1, 2.0), f) - channel::marginal_envelope_cdf(x, f)) <
            1e-8);
    }
  }
}

TEST_CASE("fas_max_cdf factorizes at mu = 0") {
  for (int n : {2, 4, 8}) {
    for (int m : {1, 2, 3}) {
      const FadingParams f{m, 1.0};
      for (double x = 0.1; x < 3.0; x += 0.2) {
        const double expect = std::pow(channel::marginal_envelope_cdf(x, f), n);
        CHECK(std::abs(fas_max_cdf(x, FasGeometry::with_correlation(n, 0.0), f) - expect) < 1e-6);
      }
    }
  }
}

TEST_CASE("fas_max_cdf matches an independent quadrature oracle") {
  for (double mu : {0.3, 0.5, 0.9}) {
    for (int m : {1, 2}) {
      for (double x : {0.4, 1.0, 1.8}) {
        CAPTURE(mu);
        CAPTURE(m);
        CAPTURE(x);
        CHECK(fas_max_cdf(x, FasGeometry::with_correlation(3, mu), {m, 1.0}) ==
              doctest::Approx(max_cdf_oracle(x, 3, m, mu)).epsilon(1e-8).scale(1.0));
      }
    }
  }
}

TEST_CASE("fas_max_cdf uses sigma^2 as a pure scale") {
  const auto fas = FasGeometry::with_correlation(4, 0.6);
  for (double x : {0.5, 1.0, 2.0}) {
    CHECK(fas_max_cdf(x * std::sqrt(2.5), fas, {2, 2.5}) ==
          doctest::Approx(fas_max_cdf(x, fas, {2, 1.0})).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("fas_max_cdf is monotone, bounded and tends to 1") {
  for (double mu : {0.0, 0.5, 0.97}) {
    const auto fas = FasGeometry::with_correlation(6, mu);
    double prev = 0.0;
    for (double x = 0.0; x < 4.0; x += 0.1) {
      const double f = fas_max_cdf(x, fas, {2, 1.0});
      CHECK(f >= prev - 1e-12);
      CHECK(f <= 1.0);
      prev = f;
    }
    CHECK(fas_max_cdf(10.0, fas, {2, 1.0}) > 1.0 - 1e-6);
  }
}

TEST_CASE("more ports shift the maximum up") {
  for (double mu : {0.2, 0.7}) {
    for (double x = 0.3; x < 3.0; x += 0.3) {
      for (int n = 1; n < 7; ++n) {
        CHECK(fas_max_cdf(x, FasGeometry::with_correlation(n + 1, mu), {1, 1.0}) <=
              fas_max_cdf(x, FasGeometry::with_correlation(n, mu), {1, 1.0}) + 1e-10);
      }
    }
  }
}

TEST_CASE("fas_max_cdf in log space for many ports") {
  const auto fas = FasGeometry::with_correlation(200, 0.4);
  const double f = fas_max_cdf(2.0, fas, {1, 1.0});
  CHECK(f > 0.0);
  CHECK(f < 1.0);
  CHECK(fas_max_cdf(2.0, FasGeometry::with_correlation(65, 0.4), {1, 1.0}) > f);
}

TEST_CASE("fas_max_cdf (N=3, m=2, mu=0.5, x=1) within 4 SE of 10^6 MGS draws") {
  const auto fas = FasGeometry::with_correlation(3, 0.5);
  const FadingParams f{2, 1.0};
  const auto s = mgs_samples(fas, f, 1'000'000, 31);
  const double emp = static_cast<double>(std::upper_bound(s.begin(), s.end(), 1.0) - s.begin()) / s.size();
  const double cdf = fas_max_cdf(1.0, fas, f);
  CHECK(std::abs(cdf - emp) < 4.0 * std::sqrt(cdf * (1.0 - cdf) / s.size()));
}

TEST_CASE("fas_max_cdf against empirical quantiles") {
  for (int n : {2, 8}) {
    for (int m : {1, 3}) {
      for (double mu : {0.0, 0.5, 0.9}) {
        const auto fas = FasGeometry::with_correlation(n, mu);
        const FadingParams f{m, 1.0};
        const auto s = mgs_samples(fas, f, 200'000, 1000 + n * 10 + m);
        for (int i = 1; i <= 20; ++i) {
          const auto idx = static_cast<std::size_t>(std::ceil((i - 0.5) / 20.0 * s.size())) - 1;
          const double x = s[idx];
          const double emp = static_cast<double>(idx + 1) / s.size();
          const double cdf = fas_max_cdf(x, fas, f);
          CAPTURE(n);
          CAPTURE(m);
          CAPTURE(mu);
          CAPTURE(x);
          CHECK(std::abs(cdf - emp) < 4.0 * std::sqrt(cdf * (1.0 - cdf) / s.size()));
        }
      }
    }
  }
}

}  // TEST_SUITE
