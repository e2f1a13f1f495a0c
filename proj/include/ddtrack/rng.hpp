// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace ddtrack {

/// Stage tags used to separate random substreams.
enum class Stage : std::uint64_t {
  anchors = 1,
  noise = 2,
  init = 3,
  predict = 4,
  resample = 5,
  regularize = 6,
  reinit = 7,
};

/// Mixes a seed and up to three counters into a 64-bit stream key.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0);

/// Counter-based random stream (SplitMix64). Each (seed, counters) tuple gives an
/// independent stream, so draws do not depend on evaluation order or threads.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) : state_(key) {}
  Stream(std::uint64_t seed, Stage stage, std::uint64_t a = 0, std::uint64_t b = 0)
      : state_(stream_key(seed, static_cast<std::uint64_t>(stage), a, b)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

 private:
  std::uint64_t state_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ddtrack
