// Copyright 2026 The lpsample Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Counter-based randomness. Every draw is a pure function of a 64-bit key and
// a 64-bit counter, so results do not depend on evaluation order or sharding.
//
// Construction (bit-exact):
//
//   mix64(z):   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//               z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//               return z ^ (z >> 31)
//
//   bits(seed, i) = mix64(mix64(seed) + (i + 1) * 0x9E3779B97F4A7C15)
//   uniform_from(seed, i) = (bits(seed, i) >> 11) * 2^-53
//
// i.e. the i-th output (0-based) of a SplitMix64 generator whose state starts
// at mix64(seed). All arithmetic is modulo 2^64.

#ifndef LPS_RANDOM_H_
#define LPS_RANDOM_H_

#include <cstdint>

namespace lps {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t random_bits(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed) + (counter + 1) * kGoldenGamma);
}

// Uniform double in [0, 1) with 53-bit resolution.
double uniform_from(std::uint64_t seed, std::uint64_t ordinal);

// Independent key for a sub-stream (trial t, replicate r, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Uniform integer in [0, bound). bound must be > 0.
std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t counter,
                            std::uint64_t bound);

}  // namespace lps

#endif  // LPS_RANDOM_H_
