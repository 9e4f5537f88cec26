#pragma once

#include <cmath>
#include <cstdint>

namespace aoi {

/// Counter-based 64-bit generator: output k of stream `key` is
/// mix(key + k * golden_gamma), with the SplitMix64 finalizer as mix.
/// Streams are derived by hashing (seed, stream id), so every arrival and
/// service process draws from its own sequence regardless of event order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Independent stream `stream` of the generator seeded with `seed`.
  static CounterRng stream(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng(mix(mix(seed ^ 0x6a09e667f3bcc909ULL) + mix(stream + kGamma)));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform on (0, 1].
  double uniform_open_zero() {
    return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform_open_zero()) / rate; }

  std::uint64_t counter() const { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace aoi
