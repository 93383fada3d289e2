#pragma once

#include <cstdint>

namespace gof {

// Counter-derived random stream. The state of stream (seed, stream,
// substream) is a pure function of the three keys, so replicate m can be
// generated on any thread in any order with identical output.
// Engine: xoshiro256** seeded through splitmix64.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) noexcept;

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1), 53-bit resolution.
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal by inversion of the normal CDF (one uniform per draw).
  double normal() noexcept;

  // Exp(1) by inversion.
  double exponential() noexcept;

  // Central chi-square with nu degrees of freedom as a sum of squared normals.
  double chisq(int nu) noexcept;

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace gof
