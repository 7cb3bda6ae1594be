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

#include "lps/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string_view>
#include <thread>

#include "lps/error.h"
#include "lps/line_reader.h"
#include "lps/random.h"

namespace lps {

namespace {

constexpr int kMaxRedraws = 1000;

void check_set(const ScoredSet& set) {
  if (set.scores.size() != set.labels.size()) {
    throw ContractError("scored set: scores and labels differ in length");
  }
  if (set.scores.empty()) throw DataError("scored set is empty");
  for (double s : set.scores) {
    if (std::isnan(s)) throw DataError("scored set contains NaN score");
  }
}

// Average precision over the multiset given by `index` into the set.
double average_precision(const ScoredSet& set, std::vector<std::size_t>& index) {
  std::sort(index.begin(), index.end(), [&](std::size_t a, std::size_t b) {
    return set.scores[a] > set.scores[b];
  });
  double total_pos = 0;
  for (std::size_t i : index) total_pos += set.labels[i] == Label::kPositive;
  if (total_pos == 0) throw DataError("auprc undefined: no positive labels");

  double ap = 0.0;
  double tp = 0.0;
  double seen = 0.0;
  for (std::size_t b = 0; b < index.size();) {
    std::size_t e = b;
    double block_pos = 0.0;
    while (e < index.size() && set.scores[index[e]] == set.scores[index[b]]) {
      block_pos += set.labels[index[e]] == Label::kPositive;
      ++e;
    }
    tp += block_pos;
    seen += static_cast<double>(e - b);
    if (block_pos > 0) ap += block_pos * (tp / seen);
    b = e;
  }
  return ap / total_pos;
}

}  // namespace

ScoredSet ScoredSet::load(const std::string& path) {
  LineReader reader(path);
  ScoredSet set;
  std::string line;
  while (reader.next(line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(reader.line_number(), "expected '<score>\\t<label>'");
    }
    double score = 0.0;
    const char* first = line.data();
    const char* last = line.data() + tab;
    const auto [ptr, ec] = std::from_chars(first, last, score);
    if (tab == 0 || ec != std::errc() || ptr != last || std::isnan(score)) {
      throw ParseError(reader.line_number(),
                       "bad score '" + line.substr(0, tab) + "'");
    }
    set.scores.push_back(score);
    set.labels.push_back(parse_label(std::string_view(line).substr(tab + 1),
                                     reader.line_number()));
  }
  return set;
}

double auprc(const ScoredSet& set) {
  check_set(set);
  std::vector<std::size_t> index(set.scores.size());
  std::iota(index.begin(), index.end(), 0);
  return average_precision(set, index);
}

double nearest_rank_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ContractError("quantile of empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ContractError("quantile must be in [0, 1]");
  const double size = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * size));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Interval bootstrap_ci(const ScoredSet& set, int replicates, std::uint64_t seed,
                      double lo_q, double hi_q, unsigned threads) {
  check_set(set);
  if (replicates < 1) throw ContractError("replicates must be >= 1");
  if (!(lo_q >= 0.0 && lo_q < hi_q && hi_q <= 1.0)) {
    throw ContractError("quantiles must satisfy 0 <= lo < hi <= 1");
  }
  if (std::none_of(set.labels.begin(), set.labels.end(),
                   [](Label l) { return l == Label::kPositive; })) {
    throw DataError("bootstrap undefined: no positive labels");
  }

  const std::size_t n = set.scores.size();
  std::vector<double> values(static_cast<std::size_t>(replicates));
  auto one = [&](std::size_t r) {
    const std::uint64_t replicate_seed = derive_seed(seed, r);
    std::vector<std::size_t> index(n);
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      const std::uint64_t draw_seed = derive_seed(replicate_seed, attempt);
      bool has_positive = false;
      for (std::size_t i = 0; i < n; ++i) {
        index[i] = uniform_index(draw_seed, i, n);
        has_positive |= set.labels[index[i]] == Label::kPositive;
      }
      if (has_positive) return average_precision(set, index);
    }
    throw DataError("bootstrap: no resample with a positive label after " +
                    std::to_string(kMaxRedraws) + " draws");
  };

  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(replicates));
  if (threads == 1) {
    for (std::size_t r = 0; r < values.size(); ++r) values[r] = one(r);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned k = 0; k < threads; ++k) {
        pool.emplace_back([&, k] {
          try {
            for (std::size_t r = k; r < values.size(); r += threads) {
              values[r] = one(r);
            }
          } catch (...) {
            errors[k] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::sort(values.begin(), values.end());
  return {nearest_rank_quantile(values, lo_q), nearest_rank_quantile(values, hi_q)};
}

}  // namespace lps
