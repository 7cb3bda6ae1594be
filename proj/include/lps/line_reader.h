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

// Buffered line-at-a-time reading of plain or gzip-compressed text files.

#ifndef LPS_LINE_READER_H_
#define LPS_LINE_READER_H_

#include <cstdint>
#include <memory>
#include <string>

namespace lps {

class LineReader {
 public:
  // Files whose name ends in ".gz" are decompressed on the fly.
  // Throws DataError if the file cannot be opened.
  explicit LineReader(const std::string& path);
  ~LineReader();

  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // Reads the next line without its terminator ("\n" or "\r\n"). Returns
  // false at end of input.
  bool next(std::string& line);

  // 1-based number of the line most recently returned.
  std::uint64_t line_number() const { return line_number_; }

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
  std::uint64_t line_number_ = 0;
};

}  // namespace lps

#endif  // LPS_LINE_READER_H_
