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

#include "lps/linmodel.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "lps/error.h"
#include "lps/summation.h"

namespace lps {

namespace {

constexpr char kMagic[5] = {'L', 'P', 'S', 'M', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw DataError("model file truncated");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

CompressorModel::CompressorModel(int bits) : bits_(bits) {
  if (bits < 1 || bits > kMaxHashBits) {
    throw ContractError("CompressorModel: bits must be in [1, 31]");
  }
  mask_ = static_cast<std::uint32_t>((std::uint64_t{1} << bits) - 1);
  weights_.assign(std::size_t{1} << bits, 0.0);
}

void CompressorModel::set_loss_cap(double cap) {
  if (!(cap > 0.0) || !std::isfinite(cap)) {
    throw ContractError("loss_cap must be positive and finite");
  }
  loss_cap_ = cap;
}

void CompressorModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  const auto b = static_cast<std::uint32_t>(bits_);
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((b >> (8 * i)) & 0xff);
  out.write(bytes, 4);
  put_f64(out, bias);
  put_f64(out, loss_cap_);
  for (double w : weights_) put_f64(out, w);
}

void CompressorModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  save(out);
  if (!out) throw DataError("write failed: " + path);
}

CompressorModel CompressorModel::load(std::istream& in) {
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0) {
    throw DataError("not a model file (bad magic)");
  }
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw DataError("model file truncated");
  }
  const std::uint32_t bits = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) |
                             (static_cast<std::uint32_t>(bytes[3]) << 24);
  if (bits < 1 || bits > static_cast<std::uint32_t>(kMaxHashBits)) {
    throw DataError("model file: bad bits " + std::to_string(bits));
  }
  CompressorModel model(static_cast<int>(bits));
  model.bias = get_f64(in);
  const double cap = get_f64(in);
  if (!(cap > 0.0) || !std::isfinite(cap)) {
    throw DataError("model file: bad loss_cap");
  }
  model.loss_cap_ = cap;
  for (double& w : model.weights_) w = get_f64(in);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("model file: trailing bytes");
  }
  return model;
}

CompressorModel CompressorModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return load(in);
}

void SgdConfig::validate() const {
  if (epochs < 1) throw ContractError("epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ContractError("learning_rate must be > 0");
  if (!(power_decay >= 0.0 && power_decay <= 1.0)) {
    throw ContractError("power_decay must be in [0, 1]");
  }
  if (!(l2 >= 0.0)) throw ContractError("l2 must be >= 0");
}

double predict_margin(const CompressorModel& model,
                      std::span<const Feature> features) {
  double margin = model.bias;
  for (const auto& f : features) margin += model.weight(f.id) * f.value;
  return margin;
}

double logistic_loss(double margin, Label label) {
  const double z = -sign(label) * margin;
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double logistic_loss_slope(double margin, Label label) {
  // -y * sigmoid(-y m)
  const double y = sign(label);
  const double z = -y * margin;
  const double s = z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                          : std::exp(z) / (1.0 + std::exp(z));
  return -y * s;
}

double zero_one_loss(double margin, Label label) {
  const Label predicted = margin > 0 ? Label::kPositive : Label::kNegative;
  return predicted == label ? 0.0 : 1.0;
}

void sgd_step(CompressorModel& model, const Instance& instance, double rate,
              double l2, double weight) {
  const double g =
      weight * logistic_loss_slope(predict_margin(model, instance.features),
                                   instance.label);
  for (const auto& f : instance.features) {
    double& w = model.weight(f.id);
    w -= rate * (g * f.value + l2 * w);
  }
  model.bias -= rate * g;
}

InstanceStream stream_of(std::span<const Instance> instances) {
  return [instances](const WeightedVisitor& visit) {
    for (const auto& instance : instances) visit(instance, 1.0);
  };
}

InstanceStream stream_of(std::span<const Instance> instances,
                         std::span<const double> weights) {
  if (instances.size() != weights.size()) {
    throw ContractError("stream_of: instances and weights differ in length");
  }
  return [instances, weights](const WeightedVisitor& visit) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      visit(instances[i], weights[i]);
    }
  };
}

CompressorModel sgd_train(const InstanceStream& stream, const SgdConfig& cfg,
                          int bits) {
  cfg.validate();
  CompressorModel model(bits);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    stream([&](const Instance& instance, double weight) {
      ++t;
      const double rate =
          cfg.learning_rate * std::pow(static_cast<double>(t), -cfg.power_decay);
      sgd_step(model, instance, rate, cfg.l2, weight);
    });
    if (t == 0) throw DataError("sgd_train: empty stream");
    model.trained_epochs = epoch + 1;
  }
  return model;
}

CompressorModel fit_constant(const InstanceStream& stream, int bits) {
  CompressorModel model(bits);
  CompensatedSum positive;
  CompensatedSum total;
  std::uint64_t n = 0;
  stream([&](const Instance& instance, double weight) {
    ++n;
    total += weight;
    if (instance.label == Label::kPositive) positive += weight;
  });
  if (n == 0) throw DataError("fit_constant: empty stream");
  const double p = positive.value();
  const double q = total.value() - p;
  constexpr double kClamp = 30.0;
  if (p <= 0.0) {
    model.bias = -kClamp;
  } else if (q <= 0.0) {
    model.bias = kClamp;
  } else {
    model.bias = std::clamp(std::log(p / q), -kClamp, kClamp);
  }
  model.trained_epochs = 1;
  return model;
}

double fit_normalizer(const CompressorModel& model,
                      const InstanceStream& stream) {
  double max_loss = 0.0;
  std::uint64_t n = 0;
  stream([&](const Instance& instance, double) {
    ++n;
    max_loss = std::max(
        max_loss,
        logistic_loss(predict_margin(model, instance.features), instance.label));
  });
  if (n == 0) throw DataError("fit_normalizer: empty stream");
  return max_loss > 0.0 ? max_loss : 1.0;
}

double normalized_loss(const CompressorModel& model, const Instance& instance,
                       LossKind kind) {
  const double margin = predict_margin(model, instance.features);
  if (kind == LossKind::kZeroOne) return zero_one_loss(margin, instance.label);
  return std::min(1.0, logistic_loss(margin, instance.label) / model.loss_cap());
}

TrainingSummary summarize(const CompressorModel& model,
                          const InstanceStream& stream) {
  TrainingSummary s;
  CompensatedSum errors;
  CompensatedSum loss;
  stream([&](const Instance& instance, double) {
    ++s.n;
    if (instance.label == Label::kPositive) ++s.positives;
    const double margin = predict_margin(model, instance.features);
    errors += zero_one_loss(margin, instance.label);
    loss += logistic_loss(margin, instance.label);
  });
  if (s.n > 0) {
    s.zero_one_error = errors.value() / static_cast<double>(s.n);
    s.mean_logistic_loss = loss.value() / static_cast<double>(s.n);
  }
  return s;
}

}  // namespace lps
