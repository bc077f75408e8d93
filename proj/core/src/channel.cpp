#include "fasuav/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "fasuav/errors.hpp"
#include "fasuav/log.hpp"
#include "fasuav/specfun.hpp"

namespace fasuav::channel {
namespace {

bool finite(const Vec3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

}  // namespace

Geometry Geometry::vertical(double d) {
  Geometry g;
  g.uav = {0.0, 0.0, d};
  g.ch = {0.0, 0.0, 0.0};
  return g;
}

void Geometry::validate() const {
  if (!finite(uav) || !finite(ch)) throw DomainError("geometry: coordinates must be finite");
  if (!(ch.z >= 0.0)) throw DomainError("geometry: CH height must be >= 0");
  if (!(uav.z > ch.z)) throw DomainError("geometry: UAV altitude must exceed CH height");
}

double distance(const Geometry& geometry) {
  geometry.validate();
  const double dx = geometry.ch.x - geometry.uav.x;
  const double dy = geometry.ch.y - geometry.uav.y;
  return std::sqrt(geometry.uav.z * geometry.uav.z + dx * dx + dy * dy);
}

void PathLossParams::validate() const {
  if (!(beta_ref > 0.0) || !std::isfinite(beta_ref)) throw DomainError("path loss: beta_ref must be > 0");
  if (!(rho >= 2.0) || !std::isfinite(rho)) throw DomainError("path loss: rho must be >= 2");
}

double path_loss(double d, const PathLossParams& params) {
  params.validate();
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("path_loss: distance must be > 0");
  return params.beta_ref * std::pow(d, -params.rho);
}

double port_correlation_raw(int n_ports, double width_wavelengths) {
  if (n_ports < 2) throw DomainError("port_correlation: needs at least two ports");
  if (!(width_wavelengths >= 0.0) || !std::isfinite(width_wavelengths)) {
    throw DomainError("port_correlation: width must be finite and >= 0");
  }
  const double n = n_ports;
  const double step = 2.0 * std::numbers::pi * width_wavelengths / (n - 1.0);
  long double sum = 0.0L;
  for (int k = 1; k < n_ports; ++k) {
    sum += static_cast<long double>(n - k) * specfun::bessel_j0(step * k);
  }
  return static_cast<double>(2.0L * sum / (n * (n - 1.0)));
}

double port_correlation(int n_ports, double width_wavelengths) {
  const double raw = port_correlation_raw(n_ports, width_wavelengths);
  if (raw < 0.0 || raw > 1.0) {
    std::ostringstream msg;
    msg << "port correlation sum " << raw << " for N=" << n_ports << ", W=" << width_wavelengths
        << " clamped to [0, 1]";
    log::warn(msg.str());
  }
  return std::clamp(raw, 0.0, 1.0);
}

FasGeometry FasGeometry::from_width(int n_ports, double width_wavelengths) {
  if (n_ports < 1) throw DomainError("fas: n_ports must be >= 1");
  if (!(width_wavelengths >= 0.0) || !std::isfinite(width_wavelengths)) {
    throw DomainError("fas: width must be finite and >= 0");
  }
  const double mu = n_ports == 1 ? 0.0 : std::sqrt(port_correlation(n_ports, width_wavelengths));
  return FasGeometry(n_ports, width_wavelengths, mu, false);
}

FasGeometry FasGeometry::with_correlation(int n_ports, double mu) {
  if (n_ports < 1) throw DomainError("fas: n_ports must be >= 1");
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("fas: mu must lie in [0, 1]");
  return FasGeometry(n_ports, std::numeric_limits<double>::quiet_NaN(), mu, true);
}

bool FasGeometry::operator==(const FasGeometry& o) const {
  const bool same_width = width_ == o.width_ || (std::isnan(width_) && std::isnan(o.width_));
  return n_ports_ == o.n_ports_ && same_width && mu_ == o.mu_ && explicit_ == o.explicit_;
}

void FadingParams::validate() const {
  if (m < 1) throw DomainError("fading: m must be a positive integer");
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) throw DomainError("fading: sigma_sq must be > 0");
}

void sample_envelopes(const FasGeometry& fas, const FadingParams& fading, RandomStream& rng,
                      std::span<double> out) {
  const auto n = static_cast<std::size_t>(fas.n_ports());
  if (out.size() != n) throw DomainError("sample_envelopes: output span must have n_ports entries");
  const double mu = fas.mu();
  const double mix = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  std::fill(out.begin(), out.end(), 0.0);
  for (int l = 0; l < fading.m; ++l) {
    const double x0 = rng.half_gaussian();
    const double y0 = rng.half_gaussian();
    out[0] += x0 * x0 + y0 * y0;
    for (std::size_t k = 1; k < n; ++k) {
      const double re = mix * rng.half_gaussian() + mu * x0;
      const double im = mix * rng.half_gaussian() + mu * y0;
      out[k] += re * re + im * im;
    }
  }
  const double scale = fading.sigma_sq / fading.m;
  for (double& v : out) v = std::sqrt(scale * v);
}

EnvelopeSample sample_envelopes(const FasGeometry& fas, const FadingParams& fading,
                                RandomStream& rng) {
  EnvelopeSample s;
  s.envelopes.resize(static_cast<std::size_t>(fas.n_ports()));
  sample_envelopes(fas, fading, rng, s.envelopes);
  return s;
}

double marginal_envelope_cdf(double x, const FadingParams& fading) {
  fading.validate();
  if (!(x >= 0.0)) throw DomainError("marginal_envelope_cdf: x must be >= 0");
  return specfun::reg_lower_gamma(fading.m, fading.m * x * x / fading.sigma_sq);
}

}  // namespace fasuav::channel
