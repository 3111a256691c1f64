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

#include "pmatch/stream_io.hpp"

#include <fstream>
#include <sstream>

namespace pmatch {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

VertexId parse_vertex(std::string_view tok, std::size_t line) {
  try {
    Rational r = parse_rational(tok);
    if (r.get_den() != 1 || r < 0 || r > kMaxVertexId) throw std::invalid_argument("range");
    return static_cast<VertexId>(r.get_num().get_si());
  } catch (const std::invalid_argument&) {
    throw ParseError(line, "bad vertex '" + std::string(tok) + "'");
  }
}

}  // namespace

std::string format_stream_class(const StreamClass& cls) {
  std::string out = stream_kind_name(cls.kind);
  if (cls.kind == StreamKind::kThetaStructured) out += " theta=" + format_rational(cls.theta);
  return out;
}

StreamFile parse_stream_text(std::string_view text) {
  StreamFile file;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      while (!body.empty() && (body.front() == ' ' || body.front() == '\t')) body.remove_prefix(1);
      file.annotations.push_back({file.stream.size(), std::string(body)});
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    auto toks = split_ws(line);
    if (!have_header) {
      if (toks.empty() || toks[0] != "stream" || toks.size() < 2 || toks.size() > 3) {
        throw ParseError(line_no, "expected 'stream <class> [theta=<rational>]'");
      }
      StreamClass cls;
      try {
        cls.kind = parse_stream_kind(std::string(toks[1]));
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
      if (toks.size() == 3) {
        if (toks[2].substr(0, 6) != "theta=") throw ParseError(line_no, "expected theta=<rational>");
        try {
          cls.theta = parse_rational(toks[2].substr(6));
        } catch (const std::invalid_argument& e) {
          throw ParseError(line_no, e.what());
        }
      }
      if (cls.kind == StreamKind::kThetaStructured && toks.size() != 3) {
        throw ParseError(line_no, "theta_structured requires theta=<rational>");
      }
      if (cls.kind != StreamKind::kThetaStructured && toks.size() == 3) {
        throw ParseError(line_no, "theta only applies to theta_structured");
      }
      file.stream.declared_class = cls;
      have_header = true;
      continue;
    }
    if (toks.size() != 4 || toks[0] != "e") throw ParseError(line_no, "expected 'e <u> <v> <weight>'");
    const VertexId u = parse_vertex(toks[1], line_no);
    const VertexId v = parse_vertex(toks[2], line_no);
    Rational w;
    try {
      w = parse_rational(toks[3]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    file.stream.push(u, v, std::move(w));
  }
  if (!have_header) throw ParseError(line_no, "missing stream header");
  return file;
}

StreamFile read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_stream_text(buf.str());
}

std::string emit_stream_text(const StreamFile& file) {
  std::string out = "stream " + format_stream_class(file.stream.declared_class) + "\n";
  std::size_t next_note = 0;
  auto flush_notes = [&](std::size_t position) {
    while (next_note < file.annotations.size() && file.annotations[next_note].position <= position) {
      out += "# " + file.annotations[next_note].text + "\n";
      ++next_note;
    }
  };
  for (std::size_t t = 0; t < file.stream.size(); ++t) {
    flush_notes(t);
    const Edge& e = file.stream.events[t];
    out += "e " + std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_rational(e.weight) + "\n";
  }
  flush_notes(file.stream.size());
  while (next_note < file.annotations.size()) {
    out += "# " + file.annotations[next_note++].text + "\n";
  }
  return out;
}

std::string emit_stream_text(const EdgeStream& stream) {
  return emit_stream_text(StreamFile{stream, {}});
}

}  // namespace pmatch
