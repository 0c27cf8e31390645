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
#include <vector>

#include "qmg/mol/graph.hpp"
#include "qmg/mol/rings.hpp"

namespace qmg::chem {

/// Perceived atom. Heavy atoms come first in slot order; explicit
/// hydrogens (when requested) follow.
struct ChemAtom {
  int z = 0;                 // atomic number
  bool aromatic = false;
  int total_h = 0;           // implicit + explicit hydrogen neighbours
  int degree = 0;            // explicit neighbours in the view
  int connectivity = 0;      // degree + implicit hydrogens
  int valence = 0;           // Kekule bond orders + hydrogens
  int ring_count = 0;        // SSSR rings containing the atom
  int smallest_ring = 0;     // 0 when acyclic
  std::size_t slot = mol::kMaxAtoms;  // graph slot, kMaxAtoms for hydrogens
};

struct ChemBond {
  std::size_t other = 0;
  mol::BondType type = mol::BondType::SINGLE;  // aromatic form
  int kekule_order = 1;
  bool in_ring = false;
};

struct ChemView {
  std::vector<ChemAtom> atoms;
  std::vector<std::vector<ChemBond>> bonds;
  std::size_t heavy_count = 0;
  mol::MolecularGraph kekule;
  mol::MolecularGraph aromatic_form;
  mol::RingInfo rings;
  mol::Aromaticity aromaticity;

  const ChemBond* bond(std::size_t a, std::size_t b) const;
};

/// Kekulizes, perceives rings and aromaticity, and flattens the result.
/// Throws InvalidArgument if the graph fails valence_valid (connectivity
/// not required).
ChemView perceive(const mol::MolecularGraph& g, bool explicit_hydrogens = false);

}  // namespace qmg::chem
