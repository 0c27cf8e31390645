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

#include "qmg/pipeline/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qmg/common/error.hpp"
#include "qmg/common/text.hpp"

namespace qmg::pipeline {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'Q', 'M', 'G', 'C', 'K', 'P', 'T', '\n'};

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string_view take(std::size_t n) {
    need(n);
    const auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw IoError("checkpoint is truncated");
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Checkpoint::Entry* Checkpoint::find(const std::string& name) {
  for (auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const Checkpoint::Entry* Checkpoint::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

void Checkpoint::set_array(const std::string& name, std::span<const double> values) {
  Entry* e = find(name);
  if (e == nullptr) e = &entries_.emplace_back();
  e->name = name;
  e->is_text = false;
  e->values.assign(values.begin(), values.end());
  e->text.clear();
}

void Checkpoint::set_text(const std::string& name, const std::string& text) {
  Entry* e = find(name);
  if (e == nullptr) e = &entries_.emplace_back();
  e->name = name;
  e->is_text = true;
  e->values.clear();
  e->text = text;
}

bool Checkpoint::has(const std::string& name) const { return find(name) != nullptr; }

const std::vector<double>& Checkpoint::array(const std::string& name) const {
  const Entry* e = find(name);
  if (e == nullptr || e->is_text) throw IoError("checkpoint has no array '" + name + "'");
  return e->values;
}

const std::string& Checkpoint::text(const std::string& name) const {
  const Entry* e = find(name);
  if (e == nullptr || !e->is_text) throw IoError("checkpoint has no text field '" + name + "'");
  return e->text;
}

void Checkpoint::read_into(const std::string& name, std::span<double> out) const {
  const auto& v = array(name);
  if (v.size() != out.size()) {
    throw IoError("checkpoint array '" + name + "' has " + std::to_string(v.size()) + " values, expected " +
                  std::to_string(out.size()));
  }
  std::copy(v.begin(), v.end(), out.begin());
}

std::vector<std::string> Checkpoint::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

std::string Checkpoint::serialize() const {
  std::string out(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(entries_.size()));
  for (const auto& e : entries_) {
    put<std::uint8_t>(out, e.is_text ? 1 : 0);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out += e.name;
    if (e.is_text) {
      put<std::uint64_t>(out, e.text.size());
      out += e.text;
    } else {
      put<std::uint64_t>(out, e.values.size());
      const auto* p = reinterpret_cast<const char*>(e.values.data());
      out.append(p, e.values.size() * sizeof(double));
    }
  }
  put<std::uint32_t>(out, crc32_of(out));
  return out;
}

Checkpoint Checkpoint::deserialize(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw IoError(bytes.size() < sizeof kMagic ? "checkpoint is truncated" : "not a checkpoint file (bad magic)");
  }
  if (bytes.size() < sizeof kMagic + 12) throw IoError("checkpoint is truncated");
  Reader header(std::string_view(bytes).substr(sizeof kMagic));
  const auto version = header.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                  std::to_string(kCheckpointVersion) + ")");
  }
  const std::string_view body(bytes.data(), bytes.size() - 4);
  std::uint32_t stored = 0;
  std::memcpy(&stored, bytes.data() + bytes.size() - 4, 4);
  if (crc32_of(body) != stored) throw IoError("checkpoint checksum mismatch (file is corrupt or truncated)");

  Reader r(body.substr(sizeof kMagic + 4));
  const auto count = r.get<std::uint32_t>();
  Checkpoint c;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto kind = r.get<std::uint8_t>();
    const auto name_len = r.get<std::uint32_t>();
    const std::string name(r.take(name_len));
    const auto n = r.get<std::uint64_t>();
    if (kind == 1) {
      c.set_text(name, std::string(r.take(n)));
    } else if (kind == 0) {
      if (n > r.remaining() / sizeof(double)) throw IoError("checkpoint is truncated");
      std::vector<double> v(n);
      const auto raw = r.take(n * sizeof(double));
      std::memcpy(v.data(), raw.data(), raw.size());
      c.set_array(name, v);
    } else {
      throw IoError("checkpoint entry '" + name + "' has unknown kind");
    }
  }
  if (r.remaining() != 0) throw IoError("checkpoint has trailing bytes");
  return c;
}

void Checkpoint::save(const std::filesystem::path& path) const { write_file_atomic(path, serialize()); }

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace qmg::pipeline
