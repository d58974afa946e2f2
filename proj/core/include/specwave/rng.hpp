#pragma once

#include <cstdint>

namespace specwave {

/// Splittable, platform-independent random stream. Stream (seed, index) is
/// derived by hashing, so replicate r of a Monte Carlo run owns stream
/// (base_seed, r) and never overlaps its siblings regardless of draw counts.
/// Gaussian variates use Box-Muller on explicit 53-bit uniforms, which keeps
/// output identical across standard libraries and compilers.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  std::uint64_t next_u64();
  /// Uniform on (0,1): (x >> 11) * 2^-53, zero mapped away from the origin.
  double uniform01();
  /// Standard normal.
  double gaussian();
  /// Unit-mean exponential.
  double exponential();

 private:
  std::uint64_t state_[4];
  double spare_{0.0};
  bool has_spare_{false};
};

}  // namespace specwave
