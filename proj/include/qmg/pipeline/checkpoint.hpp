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
#include <vector>

namespace qmg::pipeline {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Ordered collection of named double arrays and text fields.
///
/// File layout (little-endian): "QMGCKPT\n", u32 version, u32 entry count,
/// then per entry u8 kind (0 array, 1 text), u32 name length, name, u64
/// element count, payload; a trailing u32 CRC-32 covers every earlier byte.
class Checkpoint {
 public:
  /// Replaces an entry of the same name or appends a new one.
  void set_array(const std::string& name, std::span<const double> values);
  void set_text(const std::string& name, const std::string& text);

  bool has(const std::string& name) const;
  /// Throw IoError naming the missing or mistyped entry.
  const std::vector<double>& array(const std::string& name) const;
  const std::string& text(const std::string& name) const;
  /// Copies array `name` into `out`, throwing IoError on a length mismatch.
  void read_into(const std::string& name, std::span<double> out) const;

  std::vector<std::string> names() const;

  std::string serialize() const;
  /// Throws IoError on bad magic, unsupported version, truncation or a
  /// checksum mismatch.
  static Checkpoint deserialize(const std::string& bytes);

  /// Atomic write through a temporary file.
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

 private:
  struct Entry {
    std::string name;
    bool is_text = false;
    std::vector<double> values;
    std::string text;
  };
  Entry* find(const std::string& name);
  const Entry* find(const std::string& name) const;

  std::vector<Entry> entries_;
};

}  // namespace qmg::pipeline
