#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace hopavg {

// Stateless splitmix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (master, index, stream_tag).
// Stream tags: 0 = graph placement, 1 = observations, then one tag per
// algorithm (see algo_stream_tag). New tags never perturb existing streams.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index,
                                   std::uint64_t stream_tag) {
  std::uint64_t s = splitmix64(master ^ (0x9E3779B97F4A7C15ull * (index + 1)));
  return splitmix64(s ^ (0xD1B54A32D192ED03ull * (stream_tag + 1)));
}

// mt19937_64 with hand-mapped helpers. The standard pins the engine's raw
// output but not the distributions, so uniform01/uniform_int are mapped here
// to keep runs replayable across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform double in the open interval (0,1).
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n >= 1. Rejection keeps the mapping unbiased.
  int uniform_int(int n) {
    const auto bound = static_cast<std::uint64_t>(n);
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - kMax % bound;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return static_cast<int>(v % bound);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hopavg
