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

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "lps/error.h"
#include "lps/random.h"

namespace lps {
namespace {

Instance make(Label label, SparseVector features, std::uint64_t ordinal = 0) {
  return {ordinal, label, std::move(features)};
}

// Margin whose logistic loss on a positive label equals `loss`.
double margin_for_loss(double loss) { return -std::log(std::expm1(loss)); }

TEST(PredictMargin, Examples) {
  CompressorModel model(10);
  EXPECT_EQ(predict_margin(model, SparseVector{{1, 3.0}, {9, -2.0}}), 0.0);

  model.weight(3) = 2.0;
  model.bias = 1.0;
  EXPECT_DOUBLE_EQ(predict_margin(model, SparseVector{{3, 0.5}}), 2.0);

  CompressorModel cancel(10);
  cancel.weight(1) = 1.0;
  cancel.weight(2) = -1.0;
  EXPECT_EQ(predict_margin(cancel, SparseVector{{1, 1.0}, {2, 1.0}}), 0.0);
}

TEST(PredictMargin, IdsWrapModuloTableSize) {
  CompressorModel model(10);
  model.weight(5) = 1.5;
  EXPECT_EQ(predict_margin(model, SparseVector{{5 + 1024, 2.0}}), 3.0);
}

TEST(LogisticLoss, Examples) {
  EXPECT_NEAR(logistic_loss(0.0, Label::kPositive), std::log(2.0), 1e-15);
  EXPECT_NEAR(logistic_loss(50.0, Label::kPositive), 1.9287498479639178e-22, 1e-34);
  EXPECT_NEAR(logistic_loss(-50.0, Label::kPositive), 50.0, 1e-12);
  // 40-digit reference: ln(1 + e) = 1.313261687518222834...
  EXPECT_NEAR(logistic_loss(1.0, Label::kNegative), 1.3132616875182228, 1e-15);
  EXPECT_TRUE(std::isfinite(logistic_loss(-1e6, Label::kPositive)));
  EXPECT_EQ(logistic_loss(-1e6, Label::kPositive), 1e6);
}

TEST(LogisticLoss, ComplementaryPairProperty) {
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const double m = (uniform_from(21, i) - 0.5) * 200.0;
    for (Label y : {Label::kPositive, Label::kNegative}) {
      const double a = logistic_loss(m, y);
      const double b = logistic_loss(m, flip(y));
      EXPECT_GE(a, 0.0);
      EXPECT_GE(b, 0.0);
      EXPECT_GE(a + b, std::abs(m) * (1 - 1e-15));
    }
  }
}

TEST(ZeroOneLoss, SignConvention) {
  EXPECT_EQ(zero_one_loss(0.1, Label::kPositive), 0.0);
  EXPECT_EQ(zero_one_loss(0.0, Label::kPositive), 1.0);
  EXPECT_EQ(zero_one_loss(0.0, Label::kNegative), 0.0);
  EXPECT_EQ(zero_one_loss(-3.0, Label::kPositive), 1.0);
}

// The step taken by sgd_step, divided by -rate, must match a central finite
// difference of the logistic loss in each active weight and in the bias.
TEST(SgdStep, MatchesFiniteDifferenceGradient) {
  for (std::uint64_t point = 0; point < 100; ++point) {
    CompressorModel model(10);
    SparseVector x;
    for (std::uint32_t j = 0; j < 5; ++j) {
      const auto id = static_cast<std::uint32_t>(j * 37 + point % 7);
      model.weight(id) = (uniform_from(31, point * 16 + j) - 0.5) * 2.0;
      x.push_back({id, (uniform_from(32, point * 16 + j) - 0.5) * 4.0});
    }
    model.bias = uniform_from(33, point) - 0.5;
    const Instance inst =
        make(uniform_from(34, point) < 0.5 ? Label::kPositive : Label::kNegative, x);

    CompressorModel stepped = model;
    const double rate = 1e-3;
    sgd_step(stepped, inst, rate, 0.0);

    auto loss_at = [&](const CompressorModel& m) {
      return logistic_loss(predict_margin(m, inst.features), inst.label);
    };
    const double h = 1e-6;
    for (const auto& f : x) {
      CompressorModel plus = model, minus = model;
      plus.weight(f.id) += h;
      minus.weight(f.id) -= h;
      const double fd = (loss_at(plus) - loss_at(minus)) / (2 * h);
      const double step = (model.weight(f.id) - stepped.weight(f.id)) / rate;
      EXPECT_LE(std::abs(step - fd), 1e-5 * std::max(std::abs(fd), 1e-3))
          << "point " << point << " id " << f.id;
    }
    CompressorModel plus = model, minus = model;
    plus.bias += h;
    minus.bias -= h;
    const double fd = (loss_at(plus) - loss_at(minus)) / (2 * h);
    EXPECT_LE(std::abs((model.bias - stepped.bias) / rate - fd),
              1e-5 * std::max(std::abs(fd), 1e-3));
  }
}

TEST(SgdStep, WeightScalesTheStep) {
  CompressorModel a(10), b(10);
  const Instance inst = make(Label::kPositive, {{1, 1.0}});
  sgd_step(a, inst, 0.1, 0.0, 1.0);
  sgd_step(b, inst, 0.1, 0.0, 3.0);
  EXPECT_DOUBLE_EQ(b.weight(1), 3.0 * a.weight(1));
}

TEST(SgdTrain, SeparatesTwoPoints) {
  const std::vector<Instance> data = {make(Label::kPositive, {{1, 1.0}}, 0),
                                      make(Label::kNegative, {{2, 1.0}}, 1)};
  SgdConfig cfg;
  cfg.epochs = 50;
  const CompressorModel model = sgd_train(stream_of(data), cfg, 10);
  EXPECT_EQ(summarize(model, stream_of(data)).zero_one_error, 0.0);
  EXPECT_EQ(model.trained_epochs, 50);
}

TEST(SgdTrain, RepeatedInstanceMarginMovesTowardLabel) {
  for (Label y : {Label::kPositive, Label::kNegative}) {
    const std::vector<Instance> data = {make(y, {{4, 0.7}, {9, -1.3}})};
    double previous = 0.0;
    for (int epochs = 1; epochs <= 10; ++epochs) {
      SgdConfig cfg;
      cfg.epochs = epochs;
      const double m = predict_margin(sgd_train(stream_of(data), cfg, 10),
                                      data[0].features) * sign(y);
      EXPECT_GT(m, previous);
      previous = m;
    }
  }
}

TEST(SgdTrain, Deterministic) {
  std::vector<Instance> data;
  for (std::uint64_t i = 0; i < 300; ++i) {
    SparseVector x;
    for (std::uint32_t j = 0; j < 4; ++j) {
      x.push_back({static_cast<std::uint32_t>(uniform_index(41, i * 4 + j, 200) * 4 + j),
                   uniform_from(42, i * 4 + j)});
    }
    data.push_back(make(uniform_from(43, i) < 0.3 ? Label::kPositive : Label::kNegative, x, i));
  }
  SgdConfig cfg;
  cfg.epochs = 3;
  cfg.l2 = 1e-4;
  cfg.seed = 9;
  const CompressorModel a = sgd_train(stream_of(data), cfg, 12);
  const CompressorModel b = sgd_train(stream_of(data), cfg, 12);
  EXPECT_TRUE(a == b);
}

TEST(SgdTrain, EmptyStreamAndBadConfig) {
  const std::vector<Instance> none;
  EXPECT_THROW(sgd_train(stream_of(none), SgdConfig{}, 10), DataError);
  SgdConfig bad;
  bad.epochs = 0;
  const std::vector<Instance> one = {make(Label::kPositive, {})};
  EXPECT_THROW(sgd_train(stream_of(one), bad, 10), ContractError);
  bad = {};
  bad.power_decay = 1.5;
  EXPECT_THROW(sgd_train(stream_of(one), bad, 10), ContractError);
}

TEST(FitConstant, LogOddsAndMajoritySign) {
  std::vector<Instance> data;
  for (std::uint64_t i = 0; i < 100; ++i) {
    data.push_back(make(i < 20 ? Label::kPositive : Label::kNegative, {{1, 1.0}}, i));
  }
  const CompressorModel model = fit_constant(stream_of(data), 10);
  EXPECT_NEAR(model.bias, std::log(20.0 / 80.0), 1e-12);
  for (double w : model.weights()) EXPECT_EQ(w, 0.0);
  EXPECT_NEAR(summarize(model, stream_of(data)).zero_one_error, 0.2, 1e-15);

  const std::vector<Instance> all_neg = {make(Label::kNegative, {})};
  EXPECT_EQ(fit_constant(stream_of(all_neg), 10).bias, -30.0);
}

TEST(FitNormalizer, MaxLossOverStream) {
  CompressorModel model(10);
  std::vector<Instance> data;
  const double losses[] = {0.2, 0.9, 0.4};
  for (std::uint32_t i = 0; i < 3; ++i) {
    model.weight(i) = margin_for_loss(losses[i]);
    data.push_back(make(Label::kPositive, {{i, 1.0}}, i));
  }
  EXPECT_NEAR(fit_normalizer(model, stream_of(data)), 0.9, 1e-12);
  EXPECT_EQ(fit_normalizer(model, stream_of(data)),
            fit_normalizer(model, stream_of(data)));
}

TEST(FitNormalizer, ZeroMaximumFallsBackToOne) {
  CompressorModel model(10);
  model.bias = 1000.0;
  const std::vector<Instance> data = {make(Label::kPositive, {}, 0),
                                      make(Label::kPositive, {}, 1)};
  EXPECT_EQ(fit_normalizer(model, stream_of(data)), 1.0);
  const std::vector<Instance> none;
  EXPECT_THROW(fit_normalizer(model, stream_of(none)), DataError);
}

TEST(NormalizedLoss, RatioAnchorAndClamp) {
  CompressorModel model(10);
  model.weight(1) = margin_for_loss(0.45);
  model.weight(2) = margin_for_loss(0.9);
  model.weight(3) = margin_for_loss(2.0);
  model.set_loss_cap(0.9);
  EXPECT_NEAR(normalized_loss(model, make(Label::kPositive, {{1, 1.0}})), 0.5, 1e-12);
  EXPECT_NEAR(normalized_loss(model, make(Label::kPositive, {{2, 1.0}})), 1.0, 1e-12);
  EXPECT_EQ(normalized_loss(model, make(Label::kPositive, {{3, 1.0}})), 1.0);

  CompressorModel confident(10);
  confident.bias = 1000.0;
  EXPECT_EQ(normalized_loss(confident, make(Label::kPositive, {})), 0.0);
  EXPECT_EQ(normalized_loss(confident, make(Label::kNegative, {}), LossKind::kZeroOne), 1.0);
}

TEST(NormalizedLoss, AlwaysInUnitInterval) {
  CompressorModel model(10);
  for (std::uint32_t j = 0; j < 1024; ++j) model.weight(j) = (uniform_from(51, j) - 0.5) * 10;
  model.set_loss_cap(0.3);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Instance inst =
        make(i % 2 ? Label::kPositive : Label::kNegative,
             {{static_cast<std::uint32_t>(uniform_index(52, i, 1024)), uniform_from(53, i) * 5}});
    for (LossKind kind : {LossKind::kLogistic, LossKind::kZeroOne}) {
      const double l = normalized_loss(model, inst, kind);
      EXPECT_GE(l, 0.0);
      EXPECT_LE(l, 1.0);
    }
  }
}

TEST(ModelFile, RoundTripAndLayout) {
  CompressorModel model(10);
  model.bias = -0.25;
  model.set_loss_cap(3.5);
  for (std::uint32_t j = 0; j < 1024; ++j) model.weight(j) = j * 0.001 - 0.3;
  std::stringstream buf;
  model.save(buf);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 5u + 4u + 8u + 8u + 1024u * 8u);
  EXPECT_EQ(bytes.substr(0, 5), "LPSM1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 10);
  EXPECT_EQ(bytes[6], 0);
  // bias = -0.25 = 0xBFD0000000000000, little-endian.
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 0xBF);
  EXPECT_EQ(static_cast<unsigned char>(bytes[15]), 0xD0);

  const CompressorModel loaded = CompressorModel::load(buf);
  EXPECT_EQ(loaded.bits(), 10);
  EXPECT_EQ(loaded.bias, model.bias);
  EXPECT_EQ(loaded.loss_cap(), 3.5);
  EXPECT_TRUE(std::equal(loaded.weights().begin(), loaded.weights().end(),
                         model.weights().begin()));
}

TEST(ModelFile, RejectsCorruptInput) {
  std::stringstream bad_magic("LPSM2xxxxxxxxxxxxxxxxxxxxxxxxxx");
  EXPECT_THROW(CompressorModel::load(bad_magic), DataError);

  CompressorModel model(10);
  std::stringstream buf;
  model.save(buf);
  std::stringstream truncated(buf.str().substr(0, 100));
  EXPECT_THROW(CompressorModel::load(truncated), DataError);
  std::stringstream trailing(buf.str() + "x");
  EXPECT_THROW(CompressorModel::load(trailing), DataError);
}

TEST(ModelInvariants, LossCapMustBePositive) {
  CompressorModel model(10);
  EXPECT_THROW(model.set_loss_cap(0.0), ContractError);
  EXPECT_THROW(model.set_loss_cap(-1.0), ContractError);
  EXPECT_THROW(CompressorModel(0), ContractError);
  EXPECT_EQ(CompressorModel(12).weights().size(), 4096u);
}

}  // namespace
}  // namespace lps
