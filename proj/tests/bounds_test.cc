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
#include <vector>

#include "gtest/gtest.h"
#include "lps/error.h"
#include "lps/random.h"
#include "lps/sampler.h"

namespace lps {
namespace {

// Reference values below were evaluated with 40-digit arithmetic (mpmath)
// directly from the closed-form expressions.
constexpr double kRel = 1e-9;

void expect_rel(double actual, double expected, double rel = kRel) {
  EXPECT_LE(std::abs(actual - expected), rel * std::abs(expected))
      << "actual " << actual << " expected " << expected;
}

TEST(FullRisk, Mean) {
  EXPECT_EQ(full_risk(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_EQ(full_risk(std::vector<double>{1}), 1.0);
  EXPECT_NEAR(full_risk(std::vector<double>{0.2, 0.4, 0.6}), 0.4, 1e-16);
  EXPECT_THROW(full_risk(std::vector<double>{}), ContractError);
}

TEST(WeightedRisk, Examples) {
  const std::vector<std::uint8_t> all = {1, 1};
  EXPECT_NEAR(weighted_risk(std::vector<double>{0.2, 0.4}, all,
                            std::vector<double>{1, 1}),
              0.3, 1e-16);
  // (1/2) * (1/0.5) = 1: the divisor is the full n = 2.
  EXPECT_EQ(weighted_risk(std::vector<double>{1, 1}, std::vector<std::uint8_t>{1, 0},
                          std::vector<double>{0.5, 0.5}),
            1.0);
  EXPECT_EQ(weighted_risk(std::vector<double>{0.3, 0.9}, std::vector<std::uint8_t>{0, 0},
                          std::vector<double>{0.5, 0.2}),
            0.0);
}

TEST(WeightedRisk, Errors) {
  EXPECT_THROW(weighted_risk(std::vector<double>{1, 1}, std::vector<std::uint8_t>{1},
                             std::vector<double>{1, 1}),
               ContractError);
  EXPECT_THROW(weighted_risk(std::vector<double>{1}, std::vector<std::uint8_t>{1},
                             std::vector<double>{0}),
               ContractError);
}

TEST(SamplingVariance, ExamplesAndHandEnumeration) {
  EXPECT_EQ(sampling_variance(std::vector<double>{0.3, 0.7}, std::vector<double>{1, 1}), 0.0);
  EXPECT_EQ(sampling_variance(std::vector<double>{0, 0}, std::vector<double>{0.2, 0.5}), 0.0);

  const std::vector<double> losses = {1.0, 0.5};
  const std::vector<double> probs = {0.5, 1.0};
  EXPECT_DOUBLE_EQ(sampling_variance(losses, probs), 0.5);

  // Patterns with nonzero mass: Q = (1,1) -> (2 + 0.5)/2 = 1.25 with prob 0.5,
  // Q = (0,1) -> 0.5/2 = 0.25 with prob 0.5. Mean 0.75, variance 0.25.
  const double mean = 0.5 * 1.25 + 0.5 * 0.25;
  const double var = 0.5 * (1.25 - mean) * (1.25 - mean) + 0.5 * (0.25 - mean) * (0.25 - mean);
  EXPECT_DOUBLE_EQ(mean, 0.75);
  EXPECT_DOUBLE_EQ(var, 0.25);
  EXPECT_DOUBLE_EQ(sampling_variance(losses, probs) / 2.0, var);
}

TEST(EmpiricalSubsampleVariance, Examples) {
  EXPECT_NEAR(empirical_subsample_variance(std::vector<double>{0.4, 0.4, 0.4},
                                           std::vector<std::uint8_t>{1, 1, 1},
                                           std::vector<double>{1, 1, 1}),
              0.0, 1e-30);
  // Terms (2, 0), centre 1: ((2-1)^2 + (0-1)^2) / 1 = 2.
  EXPECT_DOUBLE_EQ(empirical_subsample_variance(std::vector<double>{1, 1},
                                                std::vector<std::uint8_t>{1, 0},
                                                std::vector<double>{0.5, 1}),
                   2.0);
  EXPECT_THROW(empirical_subsample_variance(std::vector<double>{1},
                                            std::vector<std::uint8_t>{1},
                                            std::vector<double>{1}),
               ContractError);
}

// For terms in [0, 1/p_min]: V_n <= (1/p_min) * R_{Q,X} * n/(n-1).
TEST(EmpiricalSubsampleVariance, BoundedByRangeTimesMean) {
  for (std::uint64_t trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + uniform_index(81, trial, 40);
    const double p_min = 0.01 + 0.9 * uniform_from(82, trial);
    const double lambda = 0.1 + 5 * uniform_from(83, trial);
    std::vector<double> losses(n), probs(n);
    std::vector<std::uint8_t> q(n);
    for (std::size_t i = 0; i < n; ++i) {
      losses[i] = uniform_from(84, trial * 64 + i);
      probs[i] = sampling_probability(losses[i], lambda, p_min);
      q[i] = uniform_from(85, trial * 64 + i) < probs[i];
      const double term = q[i] ? losses[i] / probs[i] : 0.0;
      EXPECT_GE(term, 0.0);
      EXPECT_LE(term, 1.0 / p_min);
    }
    const double v = empirical_subsample_variance(losses, q, probs);
    const double r = weighted_risk(losses, q, probs);
    const double nn = static_cast<double>(n);
    EXPECT_LE(v, r / p_min * nn / (nn - 1) * (1 + 1e-12) + 1e-15);
  }
}

TEST(SamplingVariance, BoundedByRiskOverLambda) {
  for (std::uint64_t trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + uniform_index(91, trial, 60);
    const double p_min = 1e-4 + 0.99 * uniform_from(92, trial);
    const double lambda = std::exp(8 * uniform_from(93, trial) - 3);
    std::vector<double> losses(n), probs(n);
    for (std::size_t i = 0; i < n; ++i) {
      losses[i] = uniform_from(94, trial * 64 + i);
      if (uniform_from(95, trial * 64 + i) < 0.2) losses[i] = 0.0;
      probs[i] = sampling_probability(losses[i], lambda, p_min);
    }
    EXPECT_LE(sampling_variance(losses, probs), full_risk(losses) / lambda + 1e-12);
  }
}

TEST(BennettDeviation, Examples) {
  const double l = std::log(1 / 0.05);
  EXPECT_DOUBLE_EQ(bennett_deviation(0.0, 2.0, 50, 0.05), 2.0 * l / 150.0);
  EXPECT_EQ(bennett_deviation(0.7, 3.0, 10, 1.0), 0.0);
  expect_rel(bennett_deviation(0.25, 1.0, 100, 0.05), 0.1323731157792207973);
  EXPECT_THROW(bennett_deviation(-1, 1, 10, 0.1), ContractError);
  EXPECT_THROW(bennett_deviation(1, 1, 10, 0.0), ContractError);
}

TEST(EmpiricalBernsteinDeviation, Examples) {
  const double l = std::log(2 / 0.05);
  EXPECT_DOUBLE_EQ(empirical_bernstein_deviation(0.0, 1.0, 100, 0.05),
                   7.0 * l / (3.0 * 99.0));
  expect_rel(empirical_bernstein_deviation(0.25, 1.0, 100, 0.05), 0.2227534383713601119);
  const double first_100 = empirical_bernstein_deviation(0.25, 1.0, 100, 0.05) -
                           empirical_bernstein_deviation(0.0, 1.0, 100, 0.05);
  const double first_200 = empirical_bernstein_deviation(0.25, 1.0, 200, 0.05) -
                           empirical_bernstein_deviation(0.0, 1.0, 200, 0.05);
  EXPECT_NEAR(first_200, first_100 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(empirical_bernstein_deviation(0.1, 1.0, 1, 0.05), ContractError);
}

TEST(HoeffdingDeviation, Examples) {
  EXPECT_EQ(hoeffding_deviation(10, 1.0), 0.0);
  expect_rel(hoeffding_deviation(200, 0.05), 0.08654091913011426691);
  EXPECT_NEAR(hoeffding_deviation(800, 0.05), hoeffding_deviation(200, 0.05) / 2, 1e-16);
  EXPECT_THROW(hoeffding_deviation(0, 0.05), ContractError);
}

TEST(ExcessRiskBound, WorkedExample) {
  const BoundReport r = excess_risk_bound(
      {.r_tilde = 0.1, .p_min = 0.1, .lambda = 1, .n = 1000000, .class_size = 100, .delta = 0.05});
  expect_rel(r.term_sqrt, 0.01169684762112243140);
  expect_rel(r.term_34, 0.001345637995608341909);
  expect_rel(r.term_linear, 0.0003040364024180857125);
  expect_rel(r.total, 0.01334652201914885902);
  EXPECT_EQ(r.total, r.term_sqrt + r.term_34 + r.term_linear);
}

TEST(ExcessRiskBound, VanishingRiskLimit) {
  const BoundInputs in{.r_tilde = 0, .p_min = 0.2, .lambda = 1e12, .n = 5000,
                       .class_size = 8, .delta = 0.05};
  const BoundReport r = excess_risk_bound(in);
  const double l = std::log(8 / 0.05);
  EXPECT_DOUBLE_EQ(r.term_sqrt, 2 * std::sqrt(2 * l / 5000));
  EXPECT_DOUBLE_EQ(r.term_34, 2.0 / 3.0 * std::pow(2 * l / (0.2 * 5000), 0.75));
}

TEST(ExcessRiskBound, StrictlyDecreasingInN) {
  BoundInputs in{.r_tilde = 0.3, .p_min = 0.3, .lambda = 2, .n = 2, .class_size = 50,
                 .delta = 0.01};
  double previous = excess_risk_bound(in).total;
  for (std::uint64_t n = 3; n < 100000; n = n * 3 / 2 + 1) {
    in.n = n;
    const double total = excess_risk_bound(in).total;
    EXPECT_LT(total, previous);
    previous = total;
  }
}

// Independent recomputation in 80-bit extended precision.
TEST(ExcessRiskBound, MatchesExtendedPrecision) {
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    BoundInputs in;
    in.r_tilde = uniform_from(101, trial);
    in.p_min = 1e-3 + (1 - 1e-3) * uniform_from(102, trial);
    in.lambda = std::exp(10 * uniform_from(103, trial) - 2);
    in.n = 2 + uniform_index(104, trial, 10000000);
    in.class_size = 1 + uniform_index(105, trial, 100000);
    in.delta = 1e-6 + 0.9 * uniform_from(106, trial);
    const BoundReport r = excess_risk_bound(in);

    using ld = long double;
    const ld n = static_cast<ld>(in.n);
    const ld l = logl(static_cast<ld>(in.class_size) / static_cast<ld>(in.delta));
    const ld r_t = in.r_tilde, p = in.p_min, lam = in.lambda;
    const ld sqrt_term = (2 + sqrtl(r_t / p)) * sqrtl(2 * l / n);
    const ld t34 = (powl(r_t * p / lam, 0.25L) + 2.0L / 3.0L) * powl(2 * l / (p * n), 0.75L);
    const ld lin = 4 * l / (p * (n - 1));
    expect_rel(r.term_sqrt, static_cast<double>(sqrt_term), 1e-12);
    expect_rel(r.term_34, static_cast<double>(t34), 1e-12);
    expect_rel(r.term_linear, static_cast<double>(lin), 1e-12);
    expect_rel(r.total, static_cast<double>(sqrt_term + t34 + lin), 1e-12);
    EXPECT_GE(r.term_sqrt, 0);
    EXPECT_GE(r.term_34, 0);
    EXPECT_GE(r.term_linear, 0);
  }
}

TEST(ExcessRiskBound, RejectsOutOfDomainInputs) {
  const BoundInputs ok{.r_tilde = 0.1, .p_min = 0.1, .lambda = 1, .n = 10,
                       .class_size = 2, .delta = 0.1};
  EXPECT_NO_THROW(excess_risk_bound(ok));
  auto bad = ok;
  bad.n = 1;
  EXPECT_THROW(excess_risk_bound(bad), ContractError);
  bad = ok;
  bad.delta = 0;
  EXPECT_THROW(excess_risk_bound(bad), ContractError);
  bad = ok;
  bad.p_min = 0;
  EXPECT_THROW(excess_risk_bound(bad), ContractError);
  bad = ok;
  bad.r_tilde = 1.5;
  EXPECT_THROW(excess_risk_bound(bad), ContractError);
  bad = ok;
  bad.class_size = 0;
  EXPECT_THROW(excess_risk_bound(bad), ContractError);
}

}  // namespace
}  // namespace lps
