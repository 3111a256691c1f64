// Copyright 2026 The pmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PMATCH_STREAM_IO_HPP
#define PMATCH_STREAM_IO_HPP

// Line-oriented stream files:
//
//   stream <class> [theta=<rational>]
//   e <u> <v> <weight>
//   # comment
//
// Comment lines are kept with the position (number of events before them)
// so transcripts carrying "# adv" lines survive a parse/emit round trip.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pmatch/graph.hpp"

namespace pmatch {

struct Annotation {
  std::size_t position = 0;  // number of events preceding the line
  std::string text;          // without the leading '#', trimmed on the left
};

struct StreamFile {
  EdgeStream stream;
  std::vector<Annotation> annotations;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

StreamFile parse_stream_text(std::string_view text);
StreamFile read_stream_file(const std::string& path);

/// Canonical text. Weights are emitted as "p" or "p/q".
std::string emit_stream_text(const StreamFile& file);
std::string emit_stream_text(const EdgeStream& stream);

std::string format_stream_class(const StreamClass& cls);

}  // namespace pmatch

#endif  // PMATCH_STREAM_IO_HPP
