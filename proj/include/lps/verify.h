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

// Small-scale verification harness: explicit finite hypothesis classes over
// discrete distributions, brute-force moments over every inclusion pattern,
// subsampled ERM trials, and Monte-Carlo coverage of the excess-risk bound.

#ifndef LPS_VERIFY_H_
#define LPS_VERIFY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace lps {

// Points are identified by their index into `pmf`.
struct FiniteClassSpec {
  std::vector<double> pmf;
  std::vector<std::vector<double>> losses;  // [hypothesis][point], in [0, 1]
  std::size_t tilde = 0;                    // index of the compressing one

  std::size_t num_points() const { return pmf.size(); }
  std::size_t num_hypotheses() const { return losses.size(); }

  // Throws ContractError on any broken invariant.
  void validate() const;

  // {"pmf": [...], "losses": [[...], ...], "tilde": k}
  static FiniteClassSpec from_json(const nlohmann::json& j);
  static FiniteClassSpec load(const std::string& path);
  nlohmann::json to_json() const;
};

double true_risk(const FiniteClassSpec& spec, std::size_t hypothesis);

// Index of the hypothesis with the smallest true risk (lowest index on ties).
std::size_t best_hypothesis(const FiniteClassSpec& spec);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

inline constexpr std::size_t kMaxExhaustiveN = 20;

// Exact mean and variance of weighted_risk over all 2^n inclusion patterns,
// each weighted by prod_i P_i^Q_i (1 - P_i)^(1 - Q_i). n <= 20.
Moments exhaustive_moments(std::span<const double> probs,
                           std::span<const double> losses);

// Argmin over hypotheses of the weighted risk on the sample; ties go to the
// lowest index.
std::size_t erm_select(const FiniteClassSpec& spec,
                       std::span<const std::size_t> points,
                       std::span<const std::uint8_t> inclusion,
                       std::span<const double> probs);

struct TrialConfig {
  std::size_t n = 2000;
  double lambda = 1.0;
  // Unset: use the realized R_X(h~), floored at 1/n so it stays positive.
  std::optional<double> p_min;
  double delta = 0.05;

  void validate() const;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t subsample_size = 0;
  std::size_t erm_index = 0;
  std::size_t star_index = 0;
  double true_excess = 0.0;
  double bound_total = 0.0;
  double r_tilde = 0.0;
  double p_min = 0.0;
  // Diagnostics for the variance chain on the selected hypothesis.
  double erm_weighted_risk = 0.0;
  double tilde_weighted_risk = 0.0;
  double erm_empirical_variance = 0.0;

  nlohmann::json to_json() const;
  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// Draws X ~ pmf^n, samples with probabilities from h~'s losses, runs ERM on
// the weighted subsample and scores it against the true best hypothesis.
TrialRecord run_trial(const FiniteClassSpec& spec, const TrialConfig& cfg,
                      std::uint64_t seed);

struct CoverageSummary {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
  double max_excess = 0.0;
  double mean_bound = 0.0;
  std::vector<TrialRecord> records;

  nlohmann::json to_json() const;  // summary only
};

// Trial t uses seed derive_seed(seed, t). `threads` > 1 splits trials across
// threads; the records are identical to a sequential run.
CoverageSummary coverage_report(const FiniteClassSpec& spec,
                                const TrialConfig& cfg, std::size_t trials,
                                std::uint64_t seed, unsigned threads = 1);

}  // namespace lps

#endif  // LPS_VERIFY_H_
