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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmg {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// CRC-32 (zlib polynomial).
std::uint32_t crc32_of(std::span<const unsigned char> bytes);
std::uint32_t crc32_of(std::string_view text);

/// A versioned, checksummed line-oriented data file.
///
/// Header lines start with '#'. Two of them are required:
///   # version: <n>
///   # crc32: <8 hex digits>
/// The checksum covers every non-comment, non-empty line joined with '\n'
/// (including a trailing '\n'). Each content line is split on tabs.
struct DataTable {
  int version = 0;
  std::vector<std::vector<std::string>> rows;
  std::filesystem::path source;
};

/// Throws IoError if the file is missing, lacks a header, or the checksum
/// does not match.
DataTable load_data_table(const std::filesystem::path& path);

/// Reads all lines of a text file, throwing IoError when unreadable.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace qmg
