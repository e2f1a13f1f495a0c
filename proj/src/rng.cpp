// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/rng.hpp"

namespace ddtrack {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c) {
  std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
  h = mix(h ^ (a + 0x632be59bd9b4e019ULL));
  h = mix(h ^ (b + 0x8cb92ba72f3d8dd7ULL));
  h = mix(h ^ (c + 0xd6e8feb86659fd93ULL));
  return h;
}

}  // namespace ddtrack
