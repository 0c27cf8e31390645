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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shapes incompatible with the requested primitive.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the character offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A computation produced NaN or infinity.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File missing, unreadable, truncated or failing its checksum.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmg
