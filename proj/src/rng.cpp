#include "gof/rng.hpp"

#include "gof/special_functions.hpp"

#include <cmath>

namespace gof {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t mix_key(std::uint64_t acc, std::uint64_t key) noexcept {
  std::uint64_t k = key ^ 0xD1B54A32D192ED03ULL;
  std::uint64_t a = acc ^ splitmix64(k);
  return splitmix64(a);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) noexcept {
  std::uint64_t st = seed;
  std::uint64_t key = splitmix64(st);
  key = mix_key(key, stream);
  key = mix_key(key, substream);
  for (auto& word : s_) word = splitmix64(key);
}

double RandomStream::normal() noexcept { return std_normal_quantile_fast(uniform_open()); }

double RandomStream::exponential() noexcept { return -std::log(uniform_open()); }

double RandomStream::chisq(int nu) noexcept {
  double s = 0.0;
  for (int i = 0; i < nu; ++i) {
    const double z = normal();
    s += z * z;
  }
  return s;
}

}  // namespace gof
