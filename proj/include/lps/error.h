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

#ifndef LPS_ERROR_H_
#define LPS_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lps {

// A caller broke a documented precondition (loss outside [0,1], bad index,
// non-positive probability, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input data cannot be used: unreadable file, empty stream, malformed
// record, undefined metric.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text record. `line_number` is 1-based.
class ParseError : public DataError {
 public:
  ParseError(std::uint64_t line_number, const std::string& what);

  std::uint64_t line_number() const { return line_number_; }

 private:
  std::uint64_t line_number_;
};

// A requested subsample budget cannot be met by any lambda.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lps

#endif  // LPS_ERROR_H_
