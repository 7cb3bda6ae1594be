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

// Risk, variance and deviation quantities for importance-weighted
// subsamples, and the excess-risk bound for ERM on a loss-proportional
// subsample over a finite hypothesis class. Natural logarithms throughout.

#ifndef LPS_BOUNDS_H_
#define LPS_BOUNDS_H_

#include <cstdint>
#include <span>

namespace lps {

// Mean loss over the full sample, R_X(h).
double full_risk(std::span<const double> losses);

// (1/n) * sum_i (Q_i / P_i) * loss_i, with n the full sample size.
// `inclusion` entries are 0 or 1.
double weighted_risk(std::span<const double> losses,
                     std::span<const std::uint8_t> inclusion,
                     std::span<const double> probs);

// Average per-term sampling variance (1/n) * sum_i (1/P_i - 1) * loss_i^2.
// The variance of weighted_risk over the inclusion draws is this value / n.
double sampling_variance(std::span<const double> losses,
                         std::span<const double> probs);

// (1/(n-1)) * sum_i (Q_i/P_i * loss_i - m)^2 with m = weighted_risk.
double empirical_subsample_variance(std::span<const double> losses,
                                    std::span<const std::uint8_t> inclusion,
                                    std::span<const double> probs);

// sqrt(2 V ln(1/delta) / n) + w ln(1/delta) / (3n), for i.i.d. terms in [0, w]
// with variance V. delta in (0, 1].
double bennett_deviation(double variance, double range_w, std::uint64_t n,
                         double delta);

// sqrt(2 V_n ln(2/delta) / n) + 7 w ln(2/delta) / (3(n-1)), n >= 2.
double empirical_bernstein_deviation(double emp_variance, double range_w,
                                     std::uint64_t n, double delta);

// sqrt(ln(1/delta) / (2n)).
double hoeffding_deviation(std::uint64_t n, double delta);

struct BoundInputs {
  double r_tilde = 0.0;  // empirical risk of the compressing hypothesis
  double p_min = 1.0;
  double lambda = 1.0;
  std::uint64_t n = 2;
  std::uint64_t class_size = 1;
  double delta = 0.05;

  void validate() const;
};

struct BoundReport {
  double term_sqrt = 0.0;
  double term_34 = 0.0;
  double term_linear = 0.0;
  double total = 0.0;
};

// With L = ln(class_size / delta), holding with probability >= 1 - 3 delta:
//   term_sqrt   = (2 + sqrt(r_tilde / p_min)) * sqrt(2L / n)
//   term_34     = ((r_tilde * p_min / lambda)^(1/4) + 2/3)
//                 * (2L / (p_min * n))^(3/4)
//   term_linear = 4L / (p_min * (n - 1))
BoundReport excess_risk_bound(const BoundInputs& inputs);

}  // namespace lps

#endif  // LPS_BOUNDS_H_
