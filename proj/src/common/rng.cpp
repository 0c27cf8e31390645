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

#include "qmg/common/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qmg/common/error.hpp"

namespace qmg {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("Rng::below: empty range");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split(std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(engine_()), static_cast<std::uint32_t>(engine_() >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  Rng child;
  child.engine_.seed(seq);
  return child;
}

std::string Rng::serialize() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

Rng Rng::deserialize(const std::string& text) {
  Rng rng;
  std::istringstream in(text);
  in >> rng.engine_;
  if (in.fail()) throw IoError("corrupt RNG state");
  return rng;
}

}  // namespace qmg
