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

#include "lps/bounds.h"

#include <cmath>
#include <string>

#include "lps/error.h"
#include "lps/summation.h"

namespace lps {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* fn) {
  if (a != b) throw ContractError(std::string(fn) + ": length mismatch");
}

void check_probs(std::span<const double> probs, const char* fn) {
  for (double p : probs) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw ContractError(std::string(fn) + ": probabilities must be in (0, 1]");
    }
  }
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ContractError("delta must be in (0, 1]");
  }
}

double log_inverse(double delta) { return -std::log(delta); }

}  // namespace

double full_risk(std::span<const double> losses) {
  if (losses.empty()) throw ContractError("full_risk: no losses");
  return compensated_sum(losses) / static_cast<double>(losses.size());
}

double weighted_risk(std::span<const double> losses,
                     std::span<const std::uint8_t> inclusion,
                     std::span<const double> probs) {
  check_lengths(losses.size(), inclusion.size(), "weighted_risk");
  check_lengths(losses.size(), probs.size(), "weighted_risk");
  if (losses.empty()) throw ContractError("weighted_risk: no losses");
  check_probs(probs, "weighted_risk");
  CompensatedSum sum;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (inclusion[i] != 0) sum += losses[i] / probs[i];
  }
  return sum.value() / static_cast<double>(losses.size());
}

double sampling_variance(std::span<const double> losses,
                         std::span<const double> probs) {
  check_lengths(losses.size(), probs.size(), "sampling_variance");
  if (losses.empty()) throw ContractError("sampling_variance: no losses");
  check_probs(probs, "sampling_variance");
  CompensatedSum sum;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    sum += (1.0 / probs[i] - 1.0) * losses[i] * losses[i];
  }
  return sum.value() / static_cast<double>(losses.size());
}

double empirical_subsample_variance(std::span<const double> losses,
                                    std::span<const std::uint8_t> inclusion,
                                    std::span<const double> probs) {
  if (losses.size() < 2) {
    throw ContractError("empirical_subsample_variance: n must be >= 2");
  }
  const double mean = weighted_risk(losses, inclusion, probs);
  CompensatedSum sum;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    const double term = inclusion[i] != 0 ? losses[i] / probs[i] : 0.0;
    sum += (term - mean) * (term - mean);
  }
  return sum.value() / static_cast<double>(losses.size() - 1);
}

double bennett_deviation(double variance, double range_w, std::uint64_t n,
                         double delta) {
  if (!(variance >= 0.0)) throw ContractError("variance must be >= 0");
  if (!(range_w > 0.0)) throw ContractError("range must be > 0");
  if (n < 1) throw ContractError("n must be >= 1");
  check_delta(delta);
  const double nn = static_cast<double>(n);
  const double l = log_inverse(delta);
  return std::sqrt(2.0 * variance * l / nn) + range_w * l / (3.0 * nn);
}

double empirical_bernstein_deviation(double emp_variance, double range_w,
                                     std::uint64_t n, double delta) {
  if (!(emp_variance >= 0.0)) throw ContractError("variance must be >= 0");
  if (!(range_w > 0.0)) throw ContractError("range must be > 0");
  if (n < 2) throw ContractError("n must be >= 2");
  check_delta(delta);
  const double nn = static_cast<double>(n);
  const double l = std::log(2.0 / delta);
  return std::sqrt(2.0 * emp_variance * l / nn) +
         7.0 * range_w * l / (3.0 * (nn - 1.0));
}

double hoeffding_deviation(std::uint64_t n, double delta) {
  if (n < 1) throw ContractError("n must be >= 1");
  check_delta(delta);
  return std::sqrt(log_inverse(delta) / (2.0 * static_cast<double>(n)));
}

void BoundInputs::validate() const {
  if (!(r_tilde >= 0.0 && r_tilde <= 1.0)) {
    throw ContractError("r_tilde must be in [0, 1]");
  }
  if (!(p_min > 0.0 && p_min <= 1.0)) {
    throw ContractError("p_min must be in (0, 1]");
  }
  if (!(lambda > 0.0)) throw ContractError("lambda must be > 0");
  if (n < 2) throw ContractError("n must be >= 2");
  if (class_size < 1) throw ContractError("class_size must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ContractError("delta must be in (0, 1)");
  }
}

BoundReport excess_risk_bound(const BoundInputs& in) {
  in.validate();
  const double n = static_cast<double>(in.n);
  const double l = std::log(static_cast<double>(in.class_size) / in.delta);
  BoundReport r;
  r.term_sqrt = (2.0 + std::sqrt(in.r_tilde / in.p_min)) * std::sqrt(2.0 * l / n);
  r.term_34 = (std::pow(in.r_tilde * in.p_min / in.lambda, 0.25) + 2.0 / 3.0) *
              std::pow(2.0 * l / (in.p_min * n), 0.75);
  r.term_linear = 4.0 * l / (in.p_min * (n - 1.0));
  r.total = r.term_sqrt + r.term_34 + r.term_linear;
  return r;
}

}  // namespace lps
