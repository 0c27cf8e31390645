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
#include <span>
#include <vector>

#include "qmg/mol/graph.hpp"

namespace qmg::mol {

/// Canonical ordering of the real atoms of `g`.
///
/// Ranks start from (label, degree, bond-order sum) and are refined with the
/// sorted (neighbour rank, bond type) lists until stable. Remaining ties are
/// broken by trying every member of the first tied class and keeping the
/// labelling with the smallest (labels, bond matrix) code, so isomorphic
/// graphs receive identical codes. `atom_labels` defaults to the element.
///
/// Returns slots sorted by rank; disconnected graphs are ordered component
/// by component in canonical order of the components.
std::vector<std::size_t> canonical_order(const MolecularGraph& g, std::span<const int> atom_labels = {});

/// rank[slot] for real atoms (0 = first), PAD slots ranked after all atoms
/// in index order.
std::array<std::size_t, kMaxAtoms> canonical_ranks(const MolecularGraph& g, std::span<const int> atom_labels = {});

/// Refined ranks without tie-breaking: atoms share a class when colour
/// refinement cannot tell them apart (graph-symmetric atoms always do).
/// PAD slots get -1.
std::array<int, kMaxAtoms> symmetry_classes(const MolecularGraph& g, std::span<const int> atom_labels = {});

}  // namespace qmg::mol
