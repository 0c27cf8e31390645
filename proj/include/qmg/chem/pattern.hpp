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
#include <string>
#include <string_view>
#include <vector>

#include "qmg/chem/view.hpp"

namespace qmg::chem {

/// Compiled substructure pattern in a SMARTS-like notation.
///
/// Atom primitives: element symbols (upper case aliphatic, lower case
/// aromatic), `*`, `a`, `A`, `#n`, `Hn`, `Dn`, `Xn`, `vn`, `R`/`Rn`, `r`/`rn`
/// and charges (`+0`, `-0` match, any non-zero charge never does). Bond
/// primitives: `- = # : ~ @`. Both accept `!`, `&`, `,` and `;` with the
/// usual precedence. An unmarked bond is single or aromatic. Ring closures
/// use single digits. Recursive `$()` queries are not supported.
class Pattern {
 public:
  struct Node {
    enum class Op { prim, not_, and_, or_ };
    Op op = Op::prim;
    int kind = 0;
    int value = 0;
    std::vector<int> children;
  };
  struct Bond {
    std::size_t a = 0, b = 0;
    int expr = -1;  // -1 = single or aromatic
  };

  /// Throws ParseError with the offending offset.
  static Pattern compile(std::string_view text);

  const std::string& text() const { return text_; }
  std::size_t atom_count() const { return atom_expr_.size(); }

  /// True if the pattern matches with its first atom on `root`.
  bool matches_at(const ChemView& view, std::size_t root) const;
  bool matches(const ChemView& view) const;
  /// Number of matches with distinct atom sets.
  std::size_t count_unique(const ChemView& view) const;

 private:
  friend class PatternParser;
  bool atom_ok(int expr, const ChemAtom& a) const;
  bool bond_ok(int expr, const ChemBond& b) const;
  template <class Visit>
  bool search(const ChemView& view, std::vector<std::size_t>& map, std::size_t k, Visit& visit) const;

  std::string text_;
  std::vector<Node> nodes_;
  std::vector<int> atom_expr_;
  std::vector<Bond> bonds_;
  std::vector<int> parent_;  // earlier atom joined by a tree bond, -1 for roots
};

}  // namespace qmg::chem
