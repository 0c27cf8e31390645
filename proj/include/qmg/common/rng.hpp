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
#include <random>
#include <string>

namespace qmg {

/// Seeded 64-bit Mersenne Twister with portable uniform/normal draws.
///
/// The standard distributions are implementation-defined, so draws are built
/// from raw engine output to keep checkpoints reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (no cached second value, so the state
  /// is fully described by the engine).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// +1 or -1 with equal probability.
  int rademacher() { return (engine_() >> 63) != 0 ? 1 : -1; }

  /// Derives an independent stream from this one and a tag.
  Rng split(std::uint64_t tag);

  std::string serialize() const;
  static Rng deserialize(const std::string& text);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qmg
