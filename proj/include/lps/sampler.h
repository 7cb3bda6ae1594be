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

// Loss-proportional sampling: inclusion probabilities, seeded inclusion
// decisions with importance weights, the budget solver, and the classical
// keep-all-positives baseline.

#ifndef LPS_SAMPLER_H_
#define LPS_SAMPLER_H_

#include <cstdint>
#include <optional>
#include <span>

#include "lps/ingest.h"

namespace lps {

struct SamplingParams {
  double lambda = 1.0;
  double p_min = 0.1;
  std::uint64_t seed = 0;

  // Throws ContractError unless lambda > 0 and p_min in (0, 1].
  void validate() const;
};

struct WeightedRecord {
  Instance instance;
  double probability = 1.0;
  double weight = 1.0;  // 1 / probability
};

// min(1, max(p_min, lambda * loss)). Throws ContractError if loss is outside
// [0, 1].
double sampling_probability(double loss, const SamplingParams& params);
double sampling_probability(double loss, double lambda, double p_min);

// Inclusion test shared by every sampler: uniform_from(seed, ordinal) < p.
bool included(std::uint64_t seed, std::uint64_t ordinal, double probability);

std::optional<WeightedRecord> decide(const Instance& instance, double loss,
                                     const SamplingParams& params);

// Mean inclusion probability, i.e. the expected subsample fraction.
double expected_fraction(std::span<const double> losses, double lambda,
                         double p_min);

inline constexpr double kLambdaTolerance = 1e-9;

// Smallest lambda whose expected fraction equals `target` within
// kLambdaTolerance. Throws InfeasibleError when target < p_min or when no
// lambda reaches it (e.g. all losses zero); ContractError when target > 1,
// p_min is outside (0, 1], or losses is empty.
double solve_lambda(std::span<const double> losses, double p_min,
                    double target);

// 1 for positives, negative_rate for negatives.
double constant_baseline_probability(Label label, double negative_rate);

std::optional<WeightedRecord> decide_baseline(const Instance& instance,
                                              double negative_rate,
                                              std::uint64_t seed);

}  // namespace lps

#endif  // LPS_SAMPLER_H_
