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

// Labeled instances, their text formats, and positional n-gram featurization
// of nucleotide sequences.

#ifndef LPS_INGEST_H_
#define LPS_INGEST_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace lps {

enum class Label : std::int8_t { kNegative = -1, kPositive = 1 };

inline int sign(Label label) { return static_cast<int>(label); }
inline Label flip(Label label) {
  return label == Label::kPositive ? Label::kNegative : Label::kPositive;
}

struct Feature {
  std::uint32_t id = 0;
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

using SparseVector = std::vector<Feature>;

struct Instance {
  std::uint64_t ordinal = 0;  // 0-based position in the input stream
  Label label = Label::kNegative;
  SparseVector features;  // ids unique

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct SequenceRecord {
  Label label = Label::kNegative;
  std::string bases;  // non-empty, over {A,C,G,T}
};

// Accepts "+1", "1", "-1" and "0" (mapped to negative).
Label parse_label(std::string_view text, std::uint64_t line_number);

// "<label>\t<id>:<value> <id>:<value> ..." -> Instance. A line with only a
// label (with or without the tab) has no features. Errors are ParseError
// carrying `line_number`.
Instance parse_sparse_line(std::string_view line, std::uint64_t ordinal,
                           std::uint64_t line_number);
inline Instance parse_sparse_line(std::string_view line,
                                  std::uint64_t ordinal = 0) {
  return parse_sparse_line(line, ordinal, ordinal + 1);
}

// Inverse of parse_sparse_line. Values use the shortest decimal form that
// round-trips.
std::string format_sparse_line(const Instance& instance);

// "<label>\t<ACGT string>" -> SequenceRecord.
SequenceRecord parse_sequence_line(std::string_view line,
                                   std::uint64_t line_number = 1);

inline constexpr int kDefaultHashBits = 22;
inline constexpr int kMinHashBits = 10;
inline constexpr int kMaxHashBits = 31;

// 64-bit FNV-1a over the bytes of `token`.
std::uint64_t fnv1a64(std::string_view token);

// XOR of the consecutive `bits`-wide chunks of `hash`, least significant
// chunk first.
std::uint32_t xor_fold(std::uint64_t hash, int bits);

// Hashed id of the positional token "p<position>_<ngram>".
std::uint32_t ngram_feature_id(std::size_t position, std::string_view ngram,
                               int bits);

// One unit-valued feature per (position, n-gram) for n = 1..max_n, where
// position is the 0-based offset of the n-gram's first base. Colliding ids
// are merged by summing values. Output is sorted by id.
SparseVector featurize_ngrams(const SequenceRecord& record, int max_n,
                              int bits = kDefaultHashBits);

enum class InputFormat { kSparse, kSequence };

struct ReaderOptions {
  InputFormat format = InputFormat::kSparse;
  int max_n = 3;
  int bits = kDefaultHashBits;
  // Lines carry a leading "<weight>\t" field, as written by the samplers.
  bool weighted = false;
  // Ordinal assigned to the first line; lets a shard keep global ordinals.
  std::uint64_t ordinal_offset = 0;
};

// Parses one line in the configured format. `weight` receives the leading
// weight field when options.weighted, else 1. `payload` receives the line
// with the weight field stripped.
Instance parse_line(std::string_view line, const ReaderOptions& options,
                    std::uint64_t line_number, double* weight = nullptr,
                    std::string_view* payload = nullptr);

using InstanceVisitor = std::function<void(
    const Instance& instance, double weight, std::string_view payload)>;

// Streams every line of `path` through `visit`. Returns the number of lines.
std::uint64_t for_each_instance(const std::string& path,
                                const ReaderOptions& options,
                                const InstanceVisitor& visit);

// Convenience for small inputs.
std::vector<Instance> read_instances(const std::string& path,
                                     const ReaderOptions& options);

}  // namespace lps

#endif  // LPS_INGEST_H_
