// Copyright 2026 The qcbm-molgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmg/common/text.hpp"

#include <zlib.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "qmg/common/error.hpp"

namespace qmg {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint32_t crc32_of(std::span<const unsigned char> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes a uInt length; chunk to stay portable for large buffers.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
    crc = ::crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint32_t crc32_of(std::string_view text) {
  return crc32_of(std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

DataTable load_data_table(const std::filesystem::path& path) {
  DataTable table;
  table.source = path;
  bool have_version = false;
  bool have_crc = false;
  std::uint32_t expected = 0;
  std::string body;
  for (const auto& line : read_lines(path)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto rest = trim(t.substr(1));
      if (rest.starts_with("version:")) {
        const auto v = trim(rest.substr(8));
        std::from_chars(v.data(), v.data() + v.size(), table.version);
        have_version = true;
      } else if (rest.starts_with("crc32:")) {
        const auto v = trim(rest.substr(6));
        std::from_chars(v.data(), v.data() + v.size(), expected, 16);
        have_crc = true;
      }
      continue;
    }
    body += line;
    body += '\n';
    table.rows.push_back(split(line, '\t'));
  }
  if (!have_version || !have_crc) throw IoError(path.string() + ": missing version/crc32 header");
  const auto actual = crc32_of(body);
  if (actual != expected) {
    std::ostringstream msg;
    msg << path.string() << ": checksum mismatch (expected " << std::hex << expected << ", got " << actual
        << ")";
    throw IoError(msg.str());
  }
  return table;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qmg
