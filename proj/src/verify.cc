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

#include "lps/verify.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "lps/bounds.h"
#include "lps/error.h"
#include "lps/random.h"
#include "lps/sampler.h"
#include "lps/summation.h"

namespace lps {

namespace {

constexpr std::uint64_t kPointStream = 0;
constexpr std::uint64_t kInclusionStream = 1;

std::vector<double> row_at(const FiniteClassSpec& spec, std::size_t h,
                           std::span<const std::size_t> points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = spec.losses[h][points[i]];
  }
  return out;
}

}  // namespace

void FiniteClassSpec::validate() const {
  if (pmf.empty()) throw ContractError("spec: empty support");
  if (losses.empty()) throw ContractError("spec: empty hypothesis class");
  CompensatedSum total;
  for (double p : pmf) {
    if (!(p >= 0.0)) throw ContractError("spec: negative pmf entry");
    total += p;
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw ContractError("spec: pmf sums to " + std::to_string(total.value()));
  }
  for (const auto& row : losses) {
    if (row.size() != pmf.size()) {
      throw ContractError("spec: loss row length differs from support size");
    }
    for (double l : row) {
      if (!(l >= 0.0 && l <= 1.0)) {
        throw ContractError("spec: losses must be in [0, 1]");
      }
    }
  }
  if (tilde >= losses.size()) throw ContractError("spec: tilde out of range");
}

FiniteClassSpec FiniteClassSpec::from_json(const nlohmann::json& j) {
  FiniteClassSpec spec;
  try {
    spec.pmf = j.at("pmf").get<std::vector<double>>();
    spec.losses = j.at("losses").get<std::vector<std::vector<double>>>();
    spec.tilde = j.at("tilde").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

FiniteClassSpec FiniteClassSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json FiniteClassSpec::to_json() const {
  return {{"pmf", pmf}, {"losses", losses}, {"tilde", tilde}};
}

double true_risk(const FiniteClassSpec& spec, std::size_t hypothesis) {
  if (hypothesis >= spec.num_hypotheses()) {
    throw ContractError("true_risk: hypothesis index out of range");
  }
  CompensatedSum sum;
  for (std::size_t x = 0; x < spec.num_points(); ++x) {
    sum += spec.pmf[x] * spec.losses[hypothesis][x];
  }
  return sum.value();
}

std::size_t best_hypothesis(const FiniteClassSpec& spec) {
  std::size_t best = 0;
  double best_risk = true_risk(spec, 0);
  for (std::size_t h = 1; h < spec.num_hypotheses(); ++h) {
    const double r = true_risk(spec, h);
    if (r < best_risk) {
      best = h;
      best_risk = r;
    }
  }
  return best;
}

Moments exhaustive_moments(std::span<const double> probs,
                           std::span<const double> losses) {
  const std::size_t n = probs.size();
  if (losses.size() != n) throw ContractError("exhaustive_moments: length mismatch");
  if (n == 0) throw ContractError("exhaustive_moments: empty input");
  if (n > kMaxExhaustiveN) {
    throw ContractError("exhaustive_moments: n > 20 is too large to enumerate");
  }
  for (double p : probs) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw ContractError("exhaustive_moments: probabilities must be in (0, 1]");
    }
  }

  const std::uint64_t patterns = std::uint64_t{1} << n;
  const double inv_n = 1.0 / static_cast<double>(n);
  auto visit = [&](auto&& fn) {
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      double weight = 1.0;
      CompensatedSum value;
      for (std::size_t i = 0; i < n && weight > 0.0; ++i) {
        if ((mask >> i) & 1) {
          weight *= probs[i];
          value += losses[i] / probs[i];
        } else {
          weight *= 1.0 - probs[i];
        }
      }
      if (weight > 0.0) fn(weight, value.value() * inv_n);
    }
  };

  CompensatedSum mean;
  visit([&](double w, double v) { mean += w * v; });
  Moments m;
  m.mean = mean.value();
  CompensatedSum var;
  visit([&](double w, double v) { var += w * (v - m.mean) * (v - m.mean); });
  m.variance = var.value();
  return m;
}

std::size_t erm_select(const FiniteClassSpec& spec,
                       std::span<const std::size_t> points,
                       std::span<const std::uint8_t> inclusion,
                       std::span<const double> probs) {
  std::size_t best = 0;
  double best_risk = 0.0;
  for (std::size_t h = 0; h < spec.num_hypotheses(); ++h) {
    const double r = weighted_risk(row_at(spec, h, points), inclusion, probs);
    if (h == 0 || r < best_risk) {
      best = h;
      best_risk = r;
    }
  }
  return best;
}

void TrialConfig::validate() const {
  if (n < 2) throw ContractError("trial: n must be >= 2");
  if (!(lambda > 0.0)) throw ContractError("trial: lambda must be > 0");
  if (p_min && !(*p_min > 0.0 && *p_min <= 1.0)) {
    throw ContractError("trial: p_min must be in (0, 1]");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ContractError("trial: delta must be in (0, 1)");
  }
}

nlohmann::json TrialRecord::to_json() const {
  return {{"seed", seed},
          {"n", n},
          {"subsample_size", subsample_size},
          {"erm_index", erm_index},
          {"star_index", star_index},
          {"true_excess", true_excess},
          {"bound_total", bound_total},
          {"r_tilde", r_tilde},
          {"p_min", p_min},
          {"erm_weighted_risk", erm_weighted_risk},
          {"tilde_weighted_risk", tilde_weighted_risk},
          {"erm_empirical_variance", erm_empirical_variance}};
}

TrialRecord run_trial(const FiniteClassSpec& spec, const TrialConfig& cfg,
                      std::uint64_t seed) {
  spec.validate();
  cfg.validate();

  std::vector<double> cdf(spec.num_points());
  CompensatedSum running;
  for (std::size_t x = 0; x < cdf.size(); ++x) {
    running += spec.pmf[x];
    cdf[x] = running.value();
  }
  // Rounding can leave the last cumulative value a hair under 1.
  std::size_t last_support = 0;
  for (std::size_t x = 0; x < cdf.size(); ++x) {
    if (spec.pmf[x] > 0.0) last_support = x;
  }

  const std::uint64_t point_seed = derive_seed(seed, kPointStream);
  std::vector<std::size_t> points(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double u = uniform_from(point_seed, i);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    points[i] = it == cdf.end()
                    ? last_support
                    : static_cast<std::size_t>(it - cdf.begin());
  }

  const std::vector<double> tilde_losses = row_at(spec, spec.tilde, points);
  TrialRecord rec;
  rec.seed = seed;
  rec.n = cfg.n;
  rec.r_tilde = full_risk(tilde_losses);
  rec.p_min = cfg.p_min.value_or(
      std::max(rec.r_tilde, 1.0 / static_cast<double>(cfg.n)));

  const std::uint64_t inclusion_seed = derive_seed(seed, kInclusionStream);
  std::vector<double> probs(cfg.n);
  std::vector<std::uint8_t> inclusion(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    probs[i] = sampling_probability(tilde_losses[i], cfg.lambda, rec.p_min);
    inclusion[i] = included(inclusion_seed, i, probs[i]) ? 1 : 0;
    rec.subsample_size += inclusion[i];
  }

  rec.erm_index = erm_select(spec, points, inclusion, probs);
  rec.star_index = best_hypothesis(spec);
  rec.true_excess =
      true_risk(spec, rec.erm_index) - true_risk(spec, rec.star_index);
  rec.bound_total = excess_risk_bound({.r_tilde = rec.r_tilde,
                                       .p_min = rec.p_min,
                                       .lambda = cfg.lambda,
                                       .n = cfg.n,
                                       .class_size = spec.num_hypotheses(),
                                       .delta = cfg.delta})
                        .total;

  const std::vector<double> erm_losses = row_at(spec, rec.erm_index, points);
  rec.erm_weighted_risk = weighted_risk(erm_losses, inclusion, probs);
  rec.tilde_weighted_risk = weighted_risk(tilde_losses, inclusion, probs);
  rec.erm_empirical_variance =
      empirical_subsample_variance(erm_losses, inclusion, probs);
  return rec;
}

nlohmann::json CoverageSummary::to_json() const {
  return {{"trials", trials},
          {"violations", violations},
          {"violation_fraction", violation_fraction},
          {"max_excess", max_excess},
          {"mean_bound", mean_bound}};
}

CoverageSummary coverage_report(const FiniteClassSpec& spec,
                                const TrialConfig& cfg, std::size_t trials,
                                std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw ContractError("coverage_report: trials must be >= 1");
  spec.validate();
  cfg.validate();

  CoverageSummary s;
  s.trials = trials;
  s.records.resize(trials);
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(trials));
  auto work = [&](unsigned k) {
    for (std::size_t t = k; t < trials; t += threads) {
      s.records[t] = run_trial(spec, cfg, derive_seed(seed, t));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, k);
  }

  CompensatedSum bound_sum;
  for (const auto& r : s.records) {
    if (r.true_excess > r.bound_total) ++s.violations;
    s.max_excess = std::max(s.max_excess, r.true_excess);
    bound_sum += r.bound_total;
  }
  s.violation_fraction =
      static_cast<double>(s.violations) / static_cast<double>(trials);
  s.mean_bound = bound_sum.value() / static_cast<double>(trials);
  return s;
}

}  // namespace lps
