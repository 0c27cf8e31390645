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
#include <optional>
#include <string>
#include <vector>

#include "qmg/mol/graph.hpp"

namespace qmg::mol {

/// Outcome of the validity check with per-atom detail.
struct ValenceReport {
  bool valid = false;
  std::vector<std::string> problems;
  /// Bond-order sum per slot after kekulization (0 for PAD).
  std::array<int, kMaxAtoms> used{};
  /// Implicit hydrogens per slot (0 for PAD or when invalid).
  std::array<int, kMaxAtoms> implicit_h{};
};

/// A graph is valid when it has at least one atom, its aromatic bonds admit a
/// Kekule assignment, every atom's bond-order sum is within its maximum
/// valence and, if `require_connected`, the atoms form one component.
///
/// Aromatic bonds must lie on rings and join C, N or O atoms. Every aromatic
/// C or N with spare valence and no other multiple bond must receive exactly
/// one double bond from the assignment; O never does.
ValenceReport valence_valid(const MolecularGraph& g, bool require_connected = true);

/// Replaces AROMATIC bonds with SINGLE/DOUBLE. Returns nullopt if no
/// assignment exists. Atoms are matched in increasing slot order, so the
/// result is a deterministic function of the slot layout.
std::optional<MolecularGraph> kekulize(const MolecularGraph& g);

/// As above, but with the set of atoms that must receive a double bond given
/// explicitly (used to reproduce a known pi-electron layout).
std::optional<MolecularGraph> kekulize(const MolecularGraph& g, const std::array<bool, kMaxAtoms>& needs_double);

/// Atoms that kekulize() will try to give a double bond.
std::array<bool, kMaxAtoms> atoms_needing_double(const MolecularGraph& g);

bool is_connected(const MolecularGraph& g);
/// Connected components as lists of slots, ordered by their smallest slot.
std::vector<std::vector<std::size_t>> components(const MolecularGraph& g);

/// Implicit hydrogens of a graph without AROMATIC bonds (negative values are
/// clamped to 0).
std::array<int, kMaxAtoms> implicit_hydrogens(const MolecularGraph& kekule);

}  // namespace qmg::mol
