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
#include <map>
#include <span>
#include <unordered_map>

#include "qmg/chem/view.hpp"
#include "qmg/mol/graph.hpp"

namespace qmg::chem {

/// Circular atom-environment identifiers with counts (Morgan style).
///
/// Radius-0 identifiers hash (atomic number, heavy degree, hydrogens, ring
/// membership); each iteration hashes the previous identifier with the sorted
/// (bond type, neighbour identifier) pairs. An environment that covers the
/// same bond set as one already emitted is dropped.
using EnvironmentCounts = std::map<std::uint64_t, int>;
EnvironmentCounts atom_environments(const ChemView& view, int radius = 2);
EnvironmentCounts atom_environments(const mol::MolecularGraph& g, int radius = 2);

/// Tanimoto similarity of the environment sets (counts ignored); 1 for two
/// empty sets.
double tanimoto(const EnvironmentCounts& a, const EnvironmentCounts& b);

/// Fragment rarity scores built from a reference corpus.
///
/// A fragment seen k times scores log10(k / c80), where c80 is the count of
/// the least frequent fragment among the most frequent ones that together
/// make up 80% of all occurrences. Unseen fragments score one decade below a
/// fragment seen once.
struct FragmentTable {
  std::unordered_map<std::uint64_t, double> score;
  double c80 = 1.0;
  double unknown_score = -1.0;
  std::size_t molecules = 0;

  double lookup(std::uint64_t id) const;
};

/// Throws InvalidArgument if the corpus yields no fragments.
FragmentTable build_fragment_table(std::span<const mol::MolecularGraph> corpus);

/// Table built from the shipped QM9 subset, once.
const FragmentTable& default_fragment_table();

struct ComplexityCounts {
  int atoms = 0;
  int stereocentres = 0;
  int spiro = 0;
  int bridgeheads = 0;
  int macrocycles = 0;
};

/// Candidate tetrahedral stereocentres (sp3 C with four distinct neighbour
/// classes, hydrogen counted as its own class; unconjugated N in a
/// three-ring or at a bridgehead with three), spiro and bridgehead atoms and
/// rings larger than eight.
ComplexityCounts complexity_counts(const ChemView& view);

/// Synthetic accessibility on the 1 (easy) to 10 (hard) scale: mean
/// fragment score minus size, stereo, spiro, bridge and macrocycle
/// penalties, plus a symmetry correction, mapped affinely and softened
/// above 8. Throws InvalidArgument for an empty table.
double sa_score(const mol::MolecularGraph& g, const FragmentTable& table = default_fragment_table());

}  // namespace qmg::chem
