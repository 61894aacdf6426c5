// normtail/rng.hpp
//
// Counter-based deterministic random stream.  Every (seed, trial, step)
// triple owns an independent substream, so simulation results do not depend
// on thread scheduling or on the order in which trials are executed.

#pragma once

#include <cmath>
#include <cstdint>

namespace normtail {

namespace detail {

// SplitMix64 finalizer: the standard 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Keyed counter generator.  The key is derived by hashing the stream
// coordinates together; draws are mix(key + counter).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_a = 0,
             std::uint64_t stream_b = 0)
      : counter_(0), has_cached_normal_(false), cached_normal_(0.0) {
    std::uint64_t k = detail::mix64(seed ^ 0x6a09e667f3bcc909ULL);
    k = detail::mix64(k ^ detail::mix64(stream_a ^ 0xbb67ae8584caa73bULL));
    k = detail::mix64(k ^ detail::mix64(stream_b ^ 0x3c6ef372fe94f82bULL));
    key_ = k;
  }

  std::uint64_t next_u64() { return detail::mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform on [0, 1): 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]: never zero, safe under log().
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second member of each pair is cached.
  double normal() {
    if (has_cached_normal_) {
      has_cached_normal_ = false;
      return cached_normal_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(t);
    has_cached_normal_ = true;
    return r * std::cos(t);
  }

  // Random sign, +1 or -1.
  double sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  bool has_cached_normal_;
  double cached_normal_;
};

}  // namespace normtail
