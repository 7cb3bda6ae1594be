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

#include "lps/ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "lps/error.h"
#include "lps/line_reader.h"

namespace lps {

namespace {

double parse_real(std::string_view text, std::uint64_t line_number,
                  const char* what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(line_number, std::string("bad ") + what + " '" +
                                      std::string(text) + "'");
  }
  return value;
}

std::uint32_t parse_id(std::string_view text, std::uint64_t line_number) {
  std::uint32_t id = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), id);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line_number,
                     "bad feature id '" + std::string(text) + "'");
  }
  return id;
}

// Splits off the text before the first tab. The rest is everything after it,
// or empty when there is no tab.
std::pair<std::string_view, std::string_view> split_tab(std::string_view line) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) return {line, {}};
  return {line.substr(0, tab), line.substr(tab + 1)};
}

void append_real(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

Label parse_label(std::string_view text, std::uint64_t line_number) {
  if (text == "+1" || text == "1") return Label::kPositive;
  if (text == "-1" || text == "0") return Label::kNegative;
  throw ParseError(line_number, "bad label '" + std::string(text) + "'");
}

Instance parse_sparse_line(std::string_view line, std::uint64_t ordinal,
                           std::uint64_t line_number) {
  const auto [label_text, payload] = split_tab(line);
  Instance instance;
  instance.ordinal = ordinal;
  instance.label = parse_label(label_text, line_number);

  std::size_t pos = 0;
  while (pos < payload.size()) {
    if (payload[pos] == ' ') {
      ++pos;
      continue;
    }
    auto end = payload.find(' ', pos);
    if (end == std::string_view::npos) end = payload.size();
    const std::string_view token = payload.substr(pos, end - pos);
    pos = end;

    const auto colon = token.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_number,
                       "feature '" + std::string(token) + "' lacks ':'");
    }
    instance.features.push_back(
        {parse_id(token.substr(0, colon), line_number),
         parse_real(token.substr(colon + 1), line_number, "feature value")});
  }

  if (instance.features.size() > 1) {
    std::vector<std::uint32_t> ids;
    ids.reserve(instance.features.size());
    for (const auto& f : instance.features) ids.push_back(f.id);
    std::sort(ids.begin(), ids.end());
    const auto dup = std::adjacent_find(ids.begin(), ids.end());
    if (dup != ids.end()) {
      throw ParseError(line_number,
                       "duplicate feature id " + std::to_string(*dup));
    }
  }
  return instance;
}

std::string format_sparse_line(const Instance& instance) {
  std::string out = instance.label == Label::kPositive ? "+1\t" : "-1\t";
  bool first = true;
  for (const auto& f : instance.features) {
    if (!first) out.push_back(' ');
    first = false;
    out += std::to_string(f.id);
    out.push_back(':');
    append_real(out, f.value);
  }
  return out;
}

SequenceRecord parse_sequence_line(std::string_view line,
                                   std::uint64_t line_number) {
  const auto [label_text, bases] = split_tab(line);
  SequenceRecord record;
  record.label = parse_label(label_text, line_number);
  if (bases.empty()) throw ParseError(line_number, "empty sequence");
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const char c = bases[i];
    if (c != 'A' && c != 'C' && c != 'G' && c != 'T') {
      throw ParseError(line_number, "invalid base '" + std::string(1, c) +
                                        "' at offset " + std::to_string(i));
    }
  }
  record.bases = std::string(bases);
  return record;
}

std::uint64_t fnv1a64(std::string_view token) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : token) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint32_t xor_fold(std::uint64_t hash, int bits) {
  if (bits < 1 || bits > 32) throw ContractError("xor_fold: bits out of range");
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  std::uint64_t folded = 0;
  while (hash != 0) {
    folded ^= hash & mask;
    hash >>= bits;
  }
  return static_cast<std::uint32_t>(folded);
}

std::uint32_t ngram_feature_id(std::size_t position, std::string_view ngram,
                               int bits) {
  std::string token = "p";
  token += std::to_string(position);
  token.push_back('_');
  token.append(ngram);
  return xor_fold(fnv1a64(token), bits);
}

SparseVector featurize_ngrams(const SequenceRecord& record, int max_n,
                              int bits) {
  if (max_n < 1) throw ContractError("featurize_ngrams: max_n must be >= 1");
  if (bits < kMinHashBits || bits > kMaxHashBits) {
    throw ContractError("featurize_ngrams: bits must be in [10, 31]");
  }
  const std::string_view bases = record.bases;
  SparseVector out;
  for (int n = 1; n <= max_n; ++n) {
    if (bases.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t pos = 0; pos + n <= bases.size(); ++pos) {
      out.push_back({ngram_feature_id(pos, bases.substr(pos, n), bits), 1.0});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Feature& a, const Feature& b) { return a.id < b.id; });
  // Merge collisions.
  std::size_t w = 0;
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (w > 0 && out[w - 1].id == out[r].id) {
      out[w - 1].value += out[r].value;
    } else {
      out[w++] = out[r];
    }
  }
  out.resize(w);
  return out;
}

Instance parse_line(std::string_view line, const ReaderOptions& options,
                    std::uint64_t line_number, double* weight,
                    std::string_view* payload) {
  double w = 1.0;
  if (options.weighted) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError(line_number, "missing weight field");
    }
    w = parse_real(line.substr(0, tab), line_number, "weight");
    if (w <= 0.0) throw ParseError(line_number, "weight must be positive");
    line = line.substr(tab + 1);
  }
  if (weight != nullptr) *weight = w;
  if (payload != nullptr) *payload = line;

  const std::uint64_t ordinal = options.ordinal_offset + line_number - 1;
  if (options.format == InputFormat::kSparse) {
    return parse_sparse_line(line, ordinal, line_number);
  }
  const SequenceRecord record = parse_sequence_line(line, line_number);
  Instance instance;
  instance.ordinal = ordinal;
  instance.label = record.label;
  instance.features = featurize_ngrams(record, options.max_n, options.bits);
  return instance;
}

std::uint64_t for_each_instance(const std::string& path,
                                const ReaderOptions& options,
                                const InstanceVisitor& visit) {
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    double weight = 1.0;
    std::string_view payload;
    const Instance instance =
        parse_line(line, options, reader.line_number(), &weight, &payload);
    visit(instance, weight, payload);
  }
  return reader.line_number();
}

std::vector<Instance> read_instances(const std::string& path,
                                     const ReaderOptions& options) {
  std::vector<Instance> out;
  for_each_instance(path, options,
                    [&](const Instance& instance, double, std::string_view) {
                      out.push_back(instance);
                    });
  return out;
}

}  // namespace lps
