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

#include "lps/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lps/error.h"
#include "lps/random.h"
#include "lps/summation.h"

namespace lps {

namespace {

void check_loss(double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw ContractError("loss must be in [0, 1], got " + std::to_string(loss));
  }
}

void check_p_min(double p_min) {
  if (!(p_min > 0.0 && p_min <= 1.0)) {
    throw ContractError("p_min must be in (0, 1]");
  }
}

WeightedRecord make_record(const Instance& instance, double probability) {
  return {instance, probability, 1.0 / probability};
}

}  // namespace

void SamplingParams::validate() const {
  if (!(lambda > 0.0)) throw ContractError("lambda must be > 0");
  check_p_min(p_min);
}

double sampling_probability(double loss, double lambda, double p_min) {
  check_loss(loss);
  return std::min(1.0, std::max(p_min, lambda * loss));
}

double sampling_probability(double loss, const SamplingParams& params) {
  return sampling_probability(loss, params.lambda, params.p_min);
}

bool included(std::uint64_t seed, std::uint64_t ordinal, double probability) {
  return uniform_from(seed, ordinal) < probability;
}

std::optional<WeightedRecord> decide(const Instance& instance, double loss,
                                     const SamplingParams& params) {
  const double p = sampling_probability(loss, params);
  if (!included(params.seed, instance.ordinal, p)) return std::nullopt;
  return make_record(instance, p);
}

double expected_fraction(std::span<const double> losses, double lambda,
                         double p_min) {
  if (losses.empty()) throw ContractError("expected_fraction: no losses");
  CompensatedSum sum;
  for (double loss : losses) sum += sampling_probability(loss, lambda, p_min);
  return sum.value() / static_cast<double>(losses.size());
}

double solve_lambda(std::span<const double> losses, double p_min,
                    double target) {
  if (losses.empty()) throw ContractError("solve_lambda: no losses");
  check_p_min(p_min);
  if (!(target <= 1.0)) throw ContractError("target fraction must be <= 1");
  if (target < p_min) {
    throw InfeasibleError("budget " + std::to_string(target) +
                          " is below p_min " + std::to_string(p_min));
  }

  // Past lambda = 1 / (smallest positive loss) every positive loss saturates
  // at probability 1 and the expected fraction stops growing.
  double min_positive = std::numeric_limits<double>::infinity();
  for (double loss : losses) {
    check_loss(loss);
    if (loss > 0.0) min_positive = std::min(min_positive, loss);
  }
  if (std::isinf(min_positive)) {
    if (target - p_min > kLambdaTolerance) {
      throw InfeasibleError("all losses are zero; only p_min is reachable");
    }
    min_positive = 1.0;
  }
  double hi = 1.0 / min_positive;
  const double ceiling = expected_fraction(losses, hi, p_min);
  if (target - ceiling > kLambdaTolerance) {
    throw InfeasibleError("budget " + std::to_string(target) +
                          " exceeds the largest reachable fraction " +
                          std::to_string(ceiling));
  }
  if (target >= ceiling) return hi;

  // Leftmost lambda with expected_fraction >= target. The map is continuous
  // and non-decreasing with slope at most mean(loss) <= 1, so shrinking the
  // bracket below 1e-13 pins the fraction well inside the tolerance.
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (expected_fraction(losses, mid, p_min) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double constant_baseline_probability(Label label, double negative_rate) {
  if (!(negative_rate > 0.0 && negative_rate <= 1.0)) {
    throw ContractError("negative_rate must be in (0, 1]");
  }
  return label == Label::kPositive ? 1.0 : negative_rate;
}

std::optional<WeightedRecord> decide_baseline(const Instance& instance,
                                              double negative_rate,
                                              std::uint64_t seed) {
  const double p = constant_baseline_probability(instance.label, negative_rate);
  if (!included(seed, instance.ordinal, p)) return std::nullopt;
  return make_record(instance, p);
}

}  // namespace lps
