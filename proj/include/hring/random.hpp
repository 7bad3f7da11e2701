#pragma once

#include <cstdint>
#include <random>

namespace hring {

/// Hierarchical random stream.
///
/// A stream is identified by a 64-bit key. `child(i)` derives a new key from
/// (key, i) with a SplitMix64 finalizer, so any tree of streams is a pure
/// function of the master seed and the path of child indices. The engine is
/// std::mt19937_64; uniform variates are built with explicit bit arithmetic so
/// draw sequences do not depend on the standard library's distributions.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream child(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace hring
