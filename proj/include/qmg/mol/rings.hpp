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

#include <array>
#include <vector>

#include "qmg/mol/graph.hpp"

namespace qmg::mol {

using Ring = std::vector<std::size_t>;

/// Ring structure of a graph. Rings are atom cycles listed in traversal
/// order starting from their smallest slot.
struct RingInfo {
  /// Every simple cycle.
  std::vector<Ring> cycles;
  /// Smallest set of smallest rings: shortest cycles chosen greedily while
  /// their edge sets stay independent over GF(2).
  std::vector<Ring> sssr;

  bool bond_in_ring(std::size_t i, std::size_t j) const { return ring_bond[i * kMaxAtoms + j]; }
  bool atom_in_ring(std::size_t i) const { return sssr_count[i] > 0; }
  /// Number of SSSR rings containing the atom.
  int ring_count(std::size_t i) const { return sssr_count[i]; }
  /// Size of the smallest SSSR ring containing the atom, 0 if none.
  int smallest_ring(std::size_t i) const { return smallest[i]; }
  /// True if some SSSR ring of exactly `size` atoms contains the atom.
  bool in_ring_of_size(std::size_t i, std::size_t size) const;

  std::array<bool, kMaxAtoms * kMaxAtoms> ring_bond{};
  std::array<int, kMaxAtoms> sssr_count{};
  std::array<int, kMaxAtoms> smallest{};
};

RingInfo find_rings(const MolecularGraph& g);

struct Aromaticity {
  std::array<bool, kMaxAtoms> atom{};
  std::array<bool, kMaxAtoms * kMaxAtoms> bond{};
  /// Atoms contributing one pi electron through a double bond in the system.
  std::array<bool, kMaxAtoms> pi_atom{};

  bool bond_aromatic(std::size_t i, std::size_t j) const { return bond[i * kMaxAtoms + j]; }
};

/// Hueckel aromaticity of a Kekule graph (no AROMATIC bonds). Each ring atom
/// contributes 1 electron for a ring double bond, 0 for an exocyclic double
/// bond to N or O, 2 for a saturated N or O, and disqualifies the ring
/// otherwise. A simple cycle is aromatic when all atoms qualify and the
/// count is 4n+2; its atoms and bonds are marked aromatic.
Aromaticity perceive_aromaticity(const MolecularGraph& kekule, const RingInfo& rings);

/// Kekule graph with every perceived aromatic bond replaced by AROMATIC.
MolecularGraph aromatic_form(const MolecularGraph& kekule, const Aromaticity& arom);

}  // namespace qmg::mol
