#include <benchmark/benchmark.h>

#include "fasuav/rate.hpp"
#include "fasuav/selection.hpp"
#include "fasuav/specfun.hpp"

using namespace fasuav;

namespace {

void BM_MarcumQ(benchmark::State& state) {
  const double order = static_cast<double>(state.range(0));
  double b = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::marcum_q(order, 1.3, b));
    b = b < 6.0 ? b + 0.01 : 0.5;
  }
}
BENCHMARK(BM_MarcumQ)->Arg(1)->Arg(3)->Arg(8);

void BM_FasMaxCdf(benchmark::State& state) {
  const auto fas = channel::FasGeometry::from_width(static_cast<int>(state.range(0)), 2.0);
  const channel::FadingParams fading{2, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(selection::fas_max_cdf(1.0, fas, fading));
}
BENCHMARK(BM_FasMaxCdf)->Arg(4)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_ExactRate(benchmark::State& state) {
  rate::ScenarioConfig cfg;
  cfg.fas = channel::FasGeometry::from_width(static_cast<int>(state.range(0)), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(rate::ergodic_rate_exact(cfg).rate);
}
BENCHMARK(BM_ExactRate)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MonteCarloRate(benchmark::State& state) {
  rate::ScenarioConfig cfg;
  cfg.fas = channel::FasGeometry::from_width(static_cast<int>(state.range(0)), 2.0);
  rate::McOptions mc;
  mc.trials = 100'000;
  mc.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(rate::ergodic_rate_mc(cfg, mc).rate);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * mc.trials));
}
BENCHMARK(BM_MonteCarloRate)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RateFromGains(benchmark::State& state) {
  rate::ScenarioConfig cfg;
  rate::McOptions mc;
  mc.trials = 100'000;
  mc.workers = 1;
  const auto link = rate::link_model(cfg);
  const auto gains = rate::sample_gain_products(link, mc);
  for (auto _ : state) benchmark::DoNotOptimize(rate::rate_from_gains(gains, link.nu, link.alpha).rate);
}
BENCHMARK(BM_RateFromGains)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
