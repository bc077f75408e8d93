#pragma once

#include <span>
#include <vector>

#include "fasuav/random.hpp"

namespace fasuav::channel {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool operator==(const Vec3&) const = default;
};

/// UAV hover point and cluster-head position, in meters. `z` is height.
struct Geometry {
  Vec3 uav{0.0, 0.0, 25.0};
  Vec3 ch{0.0, 0.0, 0.0};

  /// UAV directly above a ground-level CH at altitude `d`.
  static Geometry vertical(double d);

  /// Throws DomainError unless h_u > h >= 0 and all coordinates are finite.
  void validate() const;
  bool operator==(const Geometry&) const = default;
};

/// UAV-to-CH distance sqrt(h_u^2 + (X_CH - X_u)^2 + (Y_CH - Y_u)^2).
/// The CH height only enters through validation; the link length uses the
/// UAV altitude itself.
double distance(const Geometry& geometry);

struct PathLossParams {
  double beta_ref = 1.0;  // linear gain at the 1 m reference distance
  double rho = 2.7;        // path-loss exponent

  void validate() const;
  bool operator==(const PathLossParams&) const = default;
};

/// L(d) = beta_ref * d^(-rho). Shared by the downlink and uplink.
double path_loss(double d, const PathLossParams& params);

/// Raw port-averaged correlation sum
///   (2 / (N (N-1))) * sum_{k=1}^{N-1} (N - k) J0(2 pi k W / (N - 1)),
/// without clamping. May be negative.
double port_correlation_raw(int n_ports, double width_wavelengths);

/// Common squared correlation coefficient mu^2 of an N-port fluid antenna of
/// width W wavelengths, clamped to [0, 1]. Logs a warning when the raw sum
/// falls outside that range. Requires n_ports >= 2.
double port_correlation(int n_ports, double width_wavelengths);

/// Port count, aperture and the resulting correlation coefficient mu.
class FasGeometry {
 public:
  /// mu derived from the aperture via port_correlation (mu = 0 for one port).
  static FasGeometry from_width(int n_ports, double width_wavelengths);

  /// Explicit correlation coefficient, bypassing the aperture model. Used for
  /// studies that sweep mu directly; width() reports NaN.
  static FasGeometry with_correlation(int n_ports, double mu);

  int n_ports() const { return n_ports_; }
  double width() const { return width_; }
  double mu() const { return mu_; }
  double mu_sq() const { return mu_ * mu_; }
  bool explicit_correlation() const { return explicit_; }

  bool operator==(const FasGeometry& o) const;

 private:
  FasGeometry(int n, double w, double mu, bool expl) : n_ports_(n), width_(w), mu_(mu), explicit_(expl) {}

  int n_ports_;
  double width_;
  double mu_;
  bool explicit_;
};

struct FadingParams {
  int m = 1;              // Nakagami shape, integer number of Gaussian branches
  double sigma_sq = 1.0;  // average power per port

  void validate() const;
  bool operator==(const FadingParams&) const = default;
};

/// One draw of the N correlated port envelopes |h_1|, ..., |h_N|.
struct EnvelopeSample {
  std::vector<double> envelopes;
};

/// Draws one set of correlated Nakagami-m envelopes into `out` (size N).
///
/// Port 0 is the reference port: its m branches are the reference complex
/// Gaussians z_0l themselves. Every other port k mixes fresh Gaussians with
/// the reference, H_kl = sqrt(1 - mu^2) z_kl + mu z_0l, so mu is each port's
/// correlation with port 0. Envelopes are |h_k| = sqrt((sigma^2 / m) sum_l |H_kl|^2).
void sample_envelopes(const FasGeometry& fas, const FadingParams& fading, RandomStream& rng,
                      std::span<double> out);

EnvelopeSample sample_envelopes(const FasGeometry& fas, const FadingParams& fading,
                                RandomStream& rng);

/// Nakagami-m envelope CDF, P(m, m x^2 / sigma^2).
double marginal_envelope_cdf(double x, const FadingParams& fading);

}  // namespace fasuav::channel
