#pragma once

#include <cstdint>
#include <random>

namespace asprt {

/// SplitMix64 finalizer.  Full avalanche: every input bit affects every
/// output bit with probability ~1/2.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic pseudo-random stream identified by a 64-bit key.
///
/// The raw engine is std::mt19937_64, whose output sequence is fixed by the
/// standard.  Uniform and coin conversions are done here rather than through
/// the <random> distribution classes, which are implementation-defined, so
/// that a key produces the same variates with every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key), engine_(mix64(key)) {}

  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool coin() { return (next_u64() >> 63) != 0; }

  /// Child stream whose key depends only on this stream's key and `tag`,
  /// never on how many values have been drawn from this stream.
  RandomStream fork(std::uint64_t tag) const {
    return RandomStream(mix64(key_ ^ mix64(tag ^ 0x5851f42d4c957f2dULL)));
  }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace asprt
