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

#include "lps/random.h"

#include "lps/error.h"

namespace lps {

double uniform_from(std::uint64_t seed, std::uint64_t ordinal) {
  return static_cast<double>(random_bits(seed, ordinal) >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + kGoldenGamma));
}

std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t counter,
                            std::uint64_t bound) {
  if (bound == 0) throw ContractError("uniform_index: bound must be positive");
  // Lemire's multiply-shift; the bias is below 2^-64 * bound.
  const unsigned __int128 product =
      static_cast<unsigned __int128>(random_bits(seed, counter)) * bound;
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace lps
