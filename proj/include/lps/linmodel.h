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

// The compressing hypothesis: a hashed linear logistic model trained by
// plain SGD, and the normalization that maps its loss into [0, 1].

#ifndef LPS_LINMODEL_H_
#define LPS_LINMODEL_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lps/ingest.h"

namespace lps {

enum class LossKind { kLogistic, kZeroOne };

class CompressorModel {
 public:
  explicit CompressorModel(int bits = kDefaultHashBits);

  int bits() const { return bits_; }
  std::uint32_t mask() const { return mask_; }

  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }
  // Feature ids are reduced modulo 2^bits.
  double& weight(std::uint32_t id) { return weights_[id & mask_]; }
  double weight(std::uint32_t id) const { return weights_[id & mask_]; }

  double bias = 0.0;
  int trained_epochs = 0;

  double loss_cap() const { return loss_cap_; }
  void set_loss_cap(double cap);

  // Little-endian binary layout: "LPSM1", bits (u32), bias (f64),
  // loss_cap (f64), then 2^bits weights (f64).
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static CompressorModel load(std::istream& in);
  static CompressorModel load(const std::string& path);

  friend bool operator==(const CompressorModel&, const CompressorModel&) =
      default;

 private:
  int bits_;
  std::uint32_t mask_;
  std::vector<double> weights_;
  double loss_cap_ = 1.0;
};

struct SgdConfig {
  int epochs = 5;
  double learning_rate = 0.5;
  double power_decay = 0.5;
  double l2 = 0.0;
  // Recorded for reproducibility; updates visit the stream in order and
  // weights start at zero, so no draw consumes it.
  std::uint64_t seed = 0;

  void validate() const;
};

double predict_margin(const CompressorModel& model,
                      std::span<const Feature> features);

// ln(1 + exp(-label * margin)) without overflow.
double logistic_loss(double margin, Label label);

// d loss / d margin.
double logistic_loss_slope(double margin, Label label);

// 1 when the sign of the margin (non-positive counts as negative) disagrees
// with the label.
double zero_one_loss(double margin, Label label);

// One importance-weighted gradient step on a single example:
//   g = weight * slope(margin)
//   w_j -= rate * (g * x_j + l2 * w_j)   for the example's features
//   bias -= rate * g
void sgd_step(CompressorModel& model, const Instance& instance, double rate,
              double l2, double weight = 1.0);

// A re-iterable instance stream: each call replays the whole stream, in the
// same order, through the visitor with per-instance importance weights.
using WeightedVisitor = std::function<void(const Instance&, double weight)>;
using InstanceStream = std::function<void(const WeightedVisitor&)>;

InstanceStream stream_of(std::span<const Instance> instances);
InstanceStream stream_of(std::span<const Instance> instances,
                         std::span<const double> weights);

// `epochs` passes of sgd_step with rate learning_rate * t^-power_decay, t the
// 1-based global step. Throws DataError on an empty stream.
CompressorModel sgd_train(const InstanceStream& stream, const SgdConfig& cfg,
                          int bits = kDefaultHashBits);

// Bias-only model: bias = log-odds of the (weighted) positive rate, clamped
// to +-30 when one class is absent. Its sign is the majority class, which
// makes it the best constant predictor under 0-1 loss.
CompressorModel fit_constant(const InstanceStream& stream,
                             int bits = kDefaultHashBits);

// Maximum logistic loss over the stream; 1 if that maximum is 0.
double fit_normalizer(const CompressorModel& model,
                      const InstanceStream& stream);

// Loss in [0, 1]: logistic loss divided by loss_cap and clamped at 1, or the
// 0-1 loss (which needs no normalization).
double normalized_loss(const CompressorModel& model, const Instance& instance,
                       LossKind kind = LossKind::kLogistic);

struct TrainingSummary {
  std::uint64_t n = 0;
  std::uint64_t positives = 0;
  double zero_one_error = 0.0;
  double mean_logistic_loss = 0.0;
};

TrainingSummary summarize(const CompressorModel& model,
                          const InstanceStream& stream);

}  // namespace lps

#endif  // LPS_LINMODEL_H_
