#pragma once

#include <cstdint>
#include <random>

namespace fasuav {

/// Seeded pseudo-random stream. Streams are addressed by (seed, stream_id) so
/// Monte Carlo work can be split into fixed blocks, one stream per block, and
/// reproduce bit-identically however the blocks are scheduled.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Zero-mean real Gaussian with variance 1/2 (one quadrature component of a
  /// unit-power circularly symmetric complex Gaussian).
  double half_gaussian() { return normal_(engine_); }

  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace fasuav
