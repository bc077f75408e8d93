#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "fasuav/channel.hpp"
#include "fasuav/random.hpp"
#include "fasuav/specfun.hpp"

namespace fasuav::selection {

enum class Strategy {
  mgs,  // maximum gain selection
  rs,   // random selection (fixed-antenna baseline)
};

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);

struct SelectionOutcome {
  std::size_t port_index = 0;
  double envelope = 0.0;
};

/// Port with the largest envelope; ties go to the lowest index.
SelectionOutcome select_mgs(std::span<const double> envelopes);

/// Uniformly random port.
SelectionOutcome select_rs(std::span<const double> envelopes, RandomStream& rng);

SelectionOutcome select(Strategy strategy, std::span<const double> envelopes, RandomStream& rng);

/// Quadrature controls for fas_max_cdf: abs/rel tolerance of the r-integral,
/// max_terms bounds the number of interval bisections.
inline constexpr specfun::Tolerance kCdfTolerance{.abs_tol = 1e-10, .rel_tol = 1e-8, .max_terms = 4000};

/// CDF of the MGS-selected envelope, P(max_k |h_k| <= x), for N ports that
/// are each correlated with the reference port 0 through mu:
///
///   F(x) = int_0^x f_Nak(r) * prod_{k=2}^{N} [1 - Q_m(a r, b x)] dr,
///   a = sqrt(2 m mu^2 / (sigma^2 (1 - mu^2))), b = sqrt(2 m / (sigma^2 (1 - mu^2))),
///
/// where f_Nak is the Nakagami-m density of the reference envelope. The
/// product of identical factors is taken in log space beyond 64 ports.
/// mu = 1 collapses all ports onto the reference and returns the marginal CDF.
double fas_max_cdf(double x, const channel::FasGeometry& fas, const channel::FadingParams& fading,
                   const specfun::Tolerance& tol = kCdfTolerance);

}  // namespace fasuav::selection
