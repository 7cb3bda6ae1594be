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

#include "cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "lps/bounds.h"
#include "lps/error.h"
#include "lps/eval.h"
#include "lps/ingest.h"
#include "lps/linmodel.h"
#include "lps/sampler.h"
#include "lps/summation.h"
#include "lps/verify.h"

namespace lps::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_real(double value) {
  char buf[32];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::uint64_t default_seed() {
  const char* env = std::getenv("LPS_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t seed = 0;
  const std::string_view text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("LPS_SEED is not an unsigned integer: " + std::string(text));
  }
  return seed;
}

InputFormat parse_format(const std::string& name) {
  if (name == "sparse") return InputFormat::kSparse;
  if (name == "sequence") return InputFormat::kSequence;
  throw UsageError("unknown --format " + name);
}

LossKind parse_loss(const std::string& name) {
  if (name == "logistic") return LossKind::kLogistic;
  if (name == "zero-one") return LossKind::kZeroOne;
  throw UsageError("unknown --loss " + name);
}

// Writes through a temporary sibling that is renamed into place on commit,
// so a failed run leaves no partial output behind.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path)
      : path_(std::move(path)), tmp_(path_ + ".partial") {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw DataError("cannot write " + path_);
  }
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }
  std::ostream& stream() { return out_; }
  void commit() {
    out_.close();
    if (!out_) throw DataError("write failed: " + path_);
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

void write_json_file(const std::string& path, const json& j) {
  AtomicFile file(path);
  file.stream() << j.dump(2) << '\n';
  file.commit();
}

struct DataOptions {
  std::string input;
  std::string format = "sparse";
  int ngram = 3;
  int bits = kDefaultHashBits;
  std::uint64_t ordinal_offset = 0;

  ReaderOptions reader(int model_bits, bool weighted = false) const {
    ReaderOptions r;
    r.format = parse_format(format);
    r.max_n = ngram;
    r.bits = model_bits;
    r.weighted = weighted;
    r.ordinal_offset = ordinal_offset;
    return r;
  }
};

void add_data_options(CLI::App* app, DataOptions& o, bool with_bits,
                      bool with_offset) {
  app->add_option("--input", o.input, "Input file (.gz accepted)")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--format", o.format, "sparse | sequence")
      ->capture_default_str()
      ->check(CLI::IsMember({"sparse", "sequence"}));
  app->add_option("--ngram", o.ngram, "Largest n-gram for sequence input")
      ->capture_default_str()
      ->check(CLI::Range(1, 3));
  if (with_bits) {
    app->add_option("--bits", o.bits, "Hashed feature space size (log2)")
        ->capture_default_str()
        ->check(CLI::Range(kMinHashBits, kMaxHashBits));
  }
  if (with_offset) {
    app->add_option("--ordinal-offset", o.ordinal_offset,
                    "Global ordinal of the first input line (for shards)")
        ->capture_default_str();
  }
}

// Streams a file; `weight_scale` multiplies every weight.
InstanceStream file_stream(const std::string& path, const ReaderOptions& opts,
                           double weight_scale = 1.0) {
  return [path, opts, weight_scale](const WeightedVisitor& visit) {
    for_each_instance(path, opts,
                      [&](const Instance& instance, double w, std::string_view) {
                        visit(instance, w * weight_scale);
                      });
  };
}

json data_options_json(const DataOptions& o) {
  return {{"input", o.input},
          {"format", o.format},
          {"ngram", o.ngram},
          {"ordinal_offset", o.ordinal_offset}};
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  DataOptions data;
  std::string out;
  std::string manifest;
  SgdConfig sgd;
  bool constant = false;
  bool weighted = false;
};

json cmd_train(const TrainOptions& o) {
  const ReaderOptions reader = o.data.reader(o.data.bits, o.weighted);

  // Importance weights are rescaled to mean 1: the weighted objective keeps
  // its minimizer and SGD steps stay on the unweighted scale.
  double weight_scale = 1.0;
  if (o.weighted) {
    CompensatedSum total;
    std::uint64_t n = 0;
    for_each_instance(o.data.input, reader,
                      [&](const Instance&, double w, std::string_view) {
                        total += w;
                        ++n;
                      });
    if (n == 0) throw DataError("train: empty input " + o.data.input);
    weight_scale = static_cast<double>(n) / total.value();
  }
  const InstanceStream stream = file_stream(o.data.input, reader, weight_scale);

  CompressorModel model = o.constant ? fit_constant(stream, o.data.bits)
                                     : sgd_train(stream, o.sgd, o.data.bits);
  model.set_loss_cap(fit_normalizer(model, stream));
  const TrainingSummary summary = summarize(model, stream);

  std::vector<std::string> argv = {
      "train",        "--input",  o.data.input,
      "--out",        o.out,      "--format",
      o.data.format,  "--ngram",  std::to_string(o.data.ngram),
      "--bits",       std::to_string(o.data.bits)};
  if (o.constant) {
    argv.push_back("--constant");
  } else {
    for (const auto& [flag, value] :
         std::vector<std::pair<std::string, std::string>>{
             {"--epochs", std::to_string(o.sgd.epochs)},
             {"--learning-rate", format_real(o.sgd.learning_rate)},
             {"--power-decay", format_real(o.sgd.power_decay)},
             {"--l2", format_real(o.sgd.l2)},
             {"--seed", std::to_string(o.sgd.seed)}}) {
      argv.push_back(flag);
      argv.push_back(value);
    }
  }
  if (o.weighted) argv.push_back("--weighted");

  json manifest = {
      {"subcommand", "train"},
      {"argv", argv},
      {"data", data_options_json(o.data)},
      {"bits", o.data.bits},
      {"out", o.out},
      {"constant", o.constant},
      {"weighted", o.weighted},
      {"epochs", o.constant ? 0 : o.sgd.epochs},
      {"learning_rate", o.sgd.learning_rate},
      {"power_decay", o.sgd.power_decay},
      {"l2", o.sgd.l2},
      {"seed", o.sgd.seed},
      {"n", summary.n},
      {"positives", summary.positives},
      {"training_zero_one_error", summary.zero_one_error},
      {"mean_logistic_loss", summary.mean_logistic_loss},
      {"loss_cap", model.loss_cap()},
      {"bias", model.bias},
  };

  AtomicFile model_file(o.out);
  model.save(model_file.stream());
  model_file.commit();
  write_json_file(o.manifest.empty() ? o.out + ".manifest.json" : o.manifest,
                  manifest);
  return manifest;
}

// ---------------------------------------------------------------- score

struct ScoreOptions {
  DataOptions data;
  std::string model;
  std::string out;
};

json cmd_score(const ScoreOptions& o) {
  const CompressorModel model = CompressorModel::load(o.model);
  AtomicFile out(o.out);
  const std::uint64_t n = for_each_instance(
      o.data.input, o.data.reader(model.bits()),
      [&](const Instance& instance, double, std::string_view) {
        out.stream() << format_real(predict_margin(model, instance.features))
                     << '\t'
                     << (instance.label == Label::kPositive ? "+1" : "-1")
                     << '\n';
      });
  if (n == 0) throw DataError("score: empty input " + o.data.input);
  out.commit();
  return {{"subcommand", "score"},
          {"argv",
           {"score", "--input", o.data.input, "--model", o.model, "--out",
            o.out, "--format", o.data.format, "--ngram",
            std::to_string(o.data.ngram)}},
          {"data", data_options_json(o.data)},
          {"model", o.model},
          {"out", o.out},
          {"n", n}};
}

// ------------------------------------------------------------ subsample

struct SubsampleOptions {
  DataOptions data;
  std::string model;
  std::string out;
  std::string manifest;
  std::optional<double> lambda;
  std::optional<double> budget;
  std::optional<double> p_min;
  std::string loss = "logistic";
  std::uint64_t seed = 0;
};

json cmd_subsample(const SubsampleOptions& o) {
  if (o.lambda.has_value() == o.budget.has_value()) {
    throw UsageError("subsample: give exactly one of --lambda / --budget");
  }
  const CompressorModel model = CompressorModel::load(o.model);
  const LossKind kind = parse_loss(o.loss);
  const ReaderOptions reader = o.data.reader(model.bits());

  // Scoring pass.
  std::vector<double> losses;
  for_each_instance(o.data.input, reader,
                    [&](const Instance& instance, double, std::string_view) {
                      losses.push_back(normalized_loss(model, instance, kind));
                    });
  if (losses.empty()) throw DataError("subsample: empty input " + o.data.input);
  const double n = static_cast<double>(losses.size());
  const double r_tilde = full_risk(losses);

  SamplingParams params;
  params.seed = o.seed;
  params.p_min = o.p_min.value_or(std::max(r_tilde, 1.0 / n));
  params.lambda = o.lambda ? *o.lambda
                           : solve_lambda(losses, params.p_min, *o.budget);
  params.validate();
  const double fraction = expected_fraction(losses, params.lambda, params.p_min);

  // Sampling pass.
  AtomicFile out(o.out);
  std::size_t i = 0;
  std::uint64_t kept = 0;
  for_each_instance(
      o.data.input, reader,
      [&](const Instance& instance, double, std::string_view payload) {
        const auto record = decide(instance, losses.at(i++), params);
        if (!record) return;
        ++kept;
        out.stream() << format_real(record->weight) << '\t' << payload << '\n';
      });
  if (i != losses.size()) throw DataError("subsample: input changed between passes");
  out.commit();

  json manifest = {
      {"subcommand", "subsample"},
      {"argv",
       {"subsample", "--input", o.data.input, "--model", o.model, "--out",
        o.out, "--format", o.data.format, "--ngram",
        std::to_string(o.data.ngram), "--ordinal-offset",
        std::to_string(o.data.ordinal_offset), "--loss", o.loss, "--lambda",
        format_real(params.lambda), "--p-min", format_real(params.p_min),
        "--seed", std::to_string(params.seed)}},
      {"data", data_options_json(o.data)},
      {"model", o.model},
      {"out", o.out},
      {"loss", o.loss},
      {"bits", model.bits()},
      {"n", losses.size()},
      {"subsample_size", kept},
      {"lambda", params.lambda},
      {"p_min", params.p_min},
      {"seed", params.seed},
      {"budget", o.budget ? json(*o.budget) : json(nullptr)},
      {"r_tilde", r_tilde},
      {"expected_fraction", fraction},
      {"expected_size", fraction * n},
      {"size_bound", (params.p_min + params.lambda * r_tilde) * n},
  };
  write_json_file(o.manifest.empty() ? o.out + ".manifest.json" : o.manifest,
                  manifest);
  return manifest;
}

// ------------------------------------------------------------- baseline

struct BaselineOptions {
  DataOptions data;
  std::string out;
  std::string manifest;
  double negative_rate = 1.0;
  std::uint64_t seed = 0;
};

json cmd_baseline(const BaselineOptions& o) {
  constant_baseline_probability(Label::kNegative, o.negative_rate);
  ReaderOptions reader = o.data.reader(kDefaultHashBits);
  AtomicFile out(o.out);
  std::uint64_t kept = 0;
  std::uint64_t positives = 0;
  const std::uint64_t n = for_each_instance(
      o.data.input, reader,
      [&](const Instance& instance, double, std::string_view payload) {
        if (instance.label == Label::kPositive) ++positives;
        const auto record = decide_baseline(instance, o.negative_rate, o.seed);
        if (!record) return;
        ++kept;
        out.stream() << format_real(record->weight) << '\t' << payload << '\n';
      });
  if (n == 0) throw DataError("baseline: empty input " + o.data.input);
  out.commit();

  const double fraction =
      (static_cast<double>(positives) +
       o.negative_rate * static_cast<double>(n - positives)) /
      static_cast<double>(n);
  json manifest = {
      {"subcommand", "baseline"},
      {"argv",
       {"baseline", "--input", o.data.input, "--out", o.out, "--format",
        o.data.format, "--ngram", std::to_string(o.data.ngram),
        "--ordinal-offset", std::to_string(o.data.ordinal_offset),
        "--negative-rate", format_real(o.negative_rate), "--seed",
        std::to_string(o.seed)}},
      {"data", data_options_json(o.data)},
      {"out", o.out},
      {"n", n},
      {"positives", positives},
      {"subsample_size", kept},
      {"negative_rate", o.negative_rate},
      {"seed", o.seed},
      {"expected_fraction", fraction},
  };
  write_json_file(o.manifest.empty() ? o.out + ".manifest.json" : o.manifest,
                  manifest);
  return manifest;
}

// --------------------------------------------------------------- bounds

json cmd_bounds(const BoundInputs& in) {
  const BoundReport r = excess_risk_bound(in);
  return {{"subcommand", "bounds"},
          {"inputs",
           {{"r_tilde", in.r_tilde},
            {"p_min", in.p_min},
            {"lambda", in.lambda},
            {"n", in.n},
            {"class_size", in.class_size},
            {"delta", in.delta}}},
          {"term_sqrt", r.term_sqrt},
          {"term_34", r.term_34},
          {"term_linear", r.term_linear},
          {"total", r.total},
          {"confidence", 1.0 - 3.0 * in.delta}};
}

// --------------------------------------------------------------- verify

struct VerifyOptions {
  std::string spec;
  TrialConfig trial;
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
};

json cmd_verify(const VerifyOptions& o) {
  const FiniteClassSpec spec = FiniteClassSpec::load(o.spec);
  const CoverageSummary s =
      coverage_report(spec, o.trial, o.trials, o.seed, o.threads);
  if (!o.out.empty()) {
    AtomicFile out(o.out);
    for (const auto& r : s.records) out.stream() << r.to_json().dump() << '\n';
    out.commit();
  }
  json report = s.to_json();
  report["subcommand"] = "verify";
  report["inputs"] = {{"spec", o.spec},
                      {"n", o.trial.n},
                      {"lambda", o.trial.lambda},
                      {"p_min", o.trial.p_min ? json(*o.trial.p_min)
                                              : json("realized_r_tilde")},
                      {"delta", o.trial.delta},
                      {"trials", o.trials},
                      {"seed", o.seed},
                      {"class_size", spec.num_hypotheses()}};
  report["allowed_violation_fraction"] = 3.0 * o.trial.delta;
  report["out"] = o.out.empty() ? json(nullptr) : json(o.out);
  return report;
}

// ----------------------------------------------------------------- eval

struct EvalOptions {
  std::string input;
  int replicates = kDefaultReplicates;
  std::uint64_t seed = 0;
  double lo_q = 0.05;
  double hi_q = 0.95;
  unsigned threads = 1;
};

json cmd_eval(const EvalOptions& o) {
  const ScoredSet set = ScoredSet::load(o.input);
  const double ap = auprc(set);
  const Interval ci = bootstrap_ci(set, o.replicates, o.seed, o.lo_q, o.hi_q,
                                   o.threads);
  return {{"subcommand", "eval"},
          {"input", o.input},
          {"n", set.scores.size()},
          {"auprc", ap},
          {"ci_lo", ci.lo},
          {"ci_hi", ci.hi},
          {"lo_quantile", o.lo_q},
          {"hi_quantile", o.hi_q},
          {"replicates", o.replicates},
          {"seed", o.seed}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Loss-proportional subsampling toolkit", "lps"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  std::function<json()> action;
  std::string manifest_path;
  auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest_path,
                    "Manifest path (default: <out>.manifest.json)");
  };

  TrainOptions train;
  train.sgd.seed = seed;
  {
    auto* sub = app.add_subcommand("train", "Train the compressing model");
    add_data_options(sub, train.data, true, false);
    sub->add_option("--out", train.out, "Model file")->required();
    sub->add_option("--epochs", train.sgd.epochs)->capture_default_str();
    sub->add_option("--learning-rate", train.sgd.learning_rate)
        ->capture_default_str();
    sub->add_option("--power-decay", train.sgd.power_decay)
        ->capture_default_str();
    sub->add_option("--l2", train.sgd.l2)->capture_default_str();
    sub->add_option("--seed", train.sgd.seed);
    sub->add_flag("--constant", train.constant,
                  "Fit the best constant (bias-only) model");
    sub->add_flag("--weighted", train.weighted,
                  "Input lines carry a leading importance weight");
    add_manifest(sub);
    sub->callback([&] {
      train.manifest = manifest_path;
      action = [&] { return cmd_train(train); };
    });
  }

  ScoreOptions score;
  {
    auto* sub = app.add_subcommand("score", "Write '<margin>\\t<label>' lines");
    add_data_options(sub, score.data, false, false);
    sub->add_option("--model", score.model)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", score.out)->required();
    sub->callback([&] { action = [&] { return cmd_score(score); }; });
  }

  SubsampleOptions subsample;
  subsample.seed = seed;
  {
    auto* sub = app.add_subcommand("subsample", "Loss-proportional subsample");
    add_data_options(sub, subsample.data, false, true);
    sub->add_option("--model", subsample.model)
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", subsample.out)->required();
    sub->add_option("--lambda", subsample.lambda, "Proportionality constant");
    sub->add_option("--budget", subsample.budget,
                    "Target expected subsample fraction (solves lambda)");
    sub->add_option("--p-min", subsample.p_min,
                    "Minimum probability (default: mean normalized loss)");
    sub->add_option("--loss", subsample.loss, "logistic | zero-one")
        ->capture_default_str()
        ->check(CLI::IsMember({"logistic", "zero-one"}));
    sub->add_option("--seed", subsample.seed);
    add_manifest(sub);
    sub->callback([&] {
      subsample.manifest = manifest_path;
      action = [&] { return cmd_subsample(subsample); };
    });
  }

  BaselineOptions baseline;
  baseline.seed = seed;
  {
    auto* sub = app.add_subcommand(
        "baseline", "Keep all positives and a uniform sample of negatives");
    add_data_options(sub, baseline.data, false, true);
    sub->add_option("--out", baseline.out)->required();
    sub->add_option("--negative-rate", baseline.negative_rate)->required();
    sub->add_option("--seed", baseline.seed);
    add_manifest(sub);
    sub->callback([&] {
      baseline.manifest = manifest_path;
      action = [&] { return cmd_baseline(baseline); };
    });
  }

  BoundInputs bounds;
  {
    auto* sub = app.add_subcommand("bounds", "Evaluate the excess-risk bound");
    sub->add_option("--r-tilde", bounds.r_tilde)->required();
    sub->add_option("--p-min", bounds.p_min)->required();
    sub->add_option("--lambda", bounds.lambda)->required();
    sub->add_option("--n", bounds.n)->required();
    sub->add_option("--class-size", bounds.class_size)->required();
    sub->add_option("--delta", bounds.delta)->required();
    add_manifest(sub);
    sub->callback([&] { action = [&] { return cmd_bounds(bounds); }; });
  }

  VerifyOptions verify;
  verify.seed = seed;
  std::optional<double> verify_p_min;
  {
    auto* sub = app.add_subcommand(
        "verify", "Monte-Carlo coverage of the bound on a finite class");
    sub->add_option("--spec", verify.spec)->required()->check(CLI::ExistingFile);
    sub->add_option("--n", verify.trial.n)->capture_default_str();
    sub->add_option("--lambda", verify.trial.lambda)->capture_default_str();
    sub->add_option("--p-min", verify_p_min,
                    "Minimum probability (default: realized R_X of h~)");
    sub->add_option("--delta", verify.trial.delta)->capture_default_str();
    sub->add_option("--trials", verify.trials)->capture_default_str();
    sub->add_option("--seed", verify.seed);
    sub->add_option("--threads", verify.threads)->capture_default_str();
    sub->add_option("--out", verify.out, "Per-trial JSON lines");
    add_manifest(sub);
    sub->callback([&] {
      verify.trial.p_min = verify_p_min;
      action = [&] { return cmd_verify(verify); };
    });
  }

  EvalOptions eval;
  eval.seed = seed;
  {
    auto* sub = app.add_subcommand("eval", "AuPRC with a bootstrap interval");
    sub->add_option("--input", eval.input, "'<score>\\t<label>' lines")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--replicates", eval.replicates)->capture_default_str();
    sub->add_option("--seed", eval.seed);
    sub->add_option("--lo-quantile", eval.lo_q)->capture_default_str();
    sub->add_option("--hi-quantile", eval.hi_q)->capture_default_str();
    sub->add_option("--threads", eval.threads)->capture_default_str();
    add_manifest(sub);
    sub->callback([&] { action = [&] { return cmd_eval(eval); }; });
  }

  std::vector<const char*> argv = {"lps"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    json report = action();
    const std::string sub = report.value("subcommand", "");
    const bool writes_own_manifest =
        sub == "train" || sub == "subsample" || sub == "baseline";
    if (!writes_own_manifest && !manifest_path.empty()) {
      write_json_file(manifest_path, report);
    }
    out << report.dump(2) << '\n';
    return kSuccess;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InfeasibleError& e) {
    err << "error: infeasible budget: " << e.what() << '\n';
    return kInfeasibleBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace lps::cli
