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

#ifndef LPS_EVAL_H_
#define LPS_EVAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lps/ingest.h"

namespace lps {

struct ScoredSet {
  std::vector<double> scores;
  std::vector<Label> labels;

  // Reads "<score>\t<label>" lines.
  static ScoredSet load(const std::string& path);
};

// Average precision with tied scores handled as one block: sort by score
// descending and, for every block containing k positives, add
// k * (true positives so far / items so far). Divided by the positive count.
// Throws DataError when there are no positives.
double auprc(const ScoredSet& set);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Nearest-rank quantile of `sorted`: element ceil(q * size) (1-based),
// clamped to [1, size].
double nearest_rank_quantile(const std::vector<double>& sorted, double q);

inline constexpr int kDefaultReplicates = 1000;

// Bootstrap interval for auprc: `replicates` resamples of the set with
// replacement; a resample without positives is redrawn. Replicate r is a pure
// function of (seed, r), so `threads` does not change the result.
Interval bootstrap_ci(const ScoredSet& set, int replicates, std::uint64_t seed,
                      double lo_q = 0.05, double hi_q = 0.95,
                      unsigned threads = 1);

}  // namespace lps

#endif  // LPS_EVAL_H_
