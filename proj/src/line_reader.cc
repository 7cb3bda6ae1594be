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

#include "lps/line_reader.h"

#include <zlib.h>

#include <cstdio>
#include <fstream>

#include "lps/error.h"

namespace lps {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

class LineReader::Impl {
 public:
  explicit Impl(const std::string& path) : gzipped_(ends_with(path, ".gz")) {
    if (gzipped_) {
      gz_ = gzopen(path.c_str(), "rb");
      if (gz_ == nullptr) throw DataError("cannot open " + path);
      gzbuffer(gz_, 1 << 17);
    } else {
      in_.open(path, std::ios::binary);
      if (!in_) throw DataError("cannot open " + path);
    }
  }

  ~Impl() {
    if (gz_ != nullptr) gzclose(gz_);
  }

  bool next(std::string& line) {
    line.clear();
    if (!gzipped_) {
      if (!std::getline(in_, line)) return false;
    } else {
      char buf[4096];
      bool got_any = false;
      while (gzgets(gz_, buf, sizeof(buf)) != nullptr) {
        got_any = true;
        line.append(buf);
        if (!line.empty() && line.back() == '\n') {
          line.pop_back();
          break;
        }
      }
      if (!got_any) {
        int err = Z_OK;
        const char* msg = gzerror(gz_, &err);
        if (err != Z_OK && err != Z_STREAM_END) {
          throw DataError(std::string("gzip read error: ") + msg);
        }
        return false;
      }
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

 private:
  bool gzipped_;
  gzFile gz_ = nullptr;
  std::ifstream in_;
};

LineReader::LineReader(const std::string& path)
    : impl_(std::make_unique<Impl>(path)) {}

LineReader::~LineReader() = default;

bool LineReader::next(std::string& line) {
  if (!impl_->next(line)) return false;
  ++line_number_;
  return true;
}

}  // namespace lps
