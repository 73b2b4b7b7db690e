#pragma once

// Counter-based random numbers. A draw is a pure function of
// (seed, stream, index), so trials can be simulated in any order or on any
// number of threads and still produce identical values.

#include <array>
#include <cstdint>
#include <string_view>

namespace pidyn {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy
/// as 1, 2, 3").
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

/// Independent seed for a named purpose (noise, pair sampling, dither, ...).
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose);

/// One reproducible stream: draw i of stream s under seed k is
/// philox(counter = (i, s), key = k).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t index) const;

  /// Uniform on [0,1) with 53 random bits.
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  /// Uniform on [-half_width, half_width).
  double symmetric(std::uint64_t index, double half_width) const {
    return 2.0 * half_width * uniform(index) - half_width;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace pidyn
