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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmg::mol {

inline constexpr std::size_t kMaxAtoms = 9;
inline constexpr std::size_t kNodeTypes = 5;
inline constexpr std::size_t kBondTypes = 5;

enum class Element : std::uint8_t { C = 0, N = 1, O = 2, F = 3, PAD = 4 };
enum class BondType : std::uint8_t { NONE = 0, SINGLE = 1, DOUBLE = 2, TRIPLE = 3, AROMATIC = 4 };

int max_valence(Element e);
char element_symbol(Element e);
/// Integer bond order; AROMATIC counts as 1 here (its extra half is
/// assigned by kekulization).
int bond_order(BondType b);

/// Heavy-atom graph with up to kMaxAtoms slots. Unused slots are PAD and
/// carry no bonds; the diagonal is always NONE.
class MolecularGraph {
 public:
  MolecularGraph();

  Element atom(std::size_t i) const { return atoms_.at(i); }
  void set_atom(std::size_t i, Element e);
  BondType bond(std::size_t i, std::size_t j) const { return bonds_.at(i * kMaxAtoms + j); }
  /// Sets both (i,j) and (j,i). Throws InvalidArgument on i == j or when an
  /// endpoint is PAD and the bond is not NONE.
  void set_bond(std::size_t i, std::size_t j, BondType b);

  /// Slots holding a real atom, in index order.
  std::vector<std::size_t> atom_indices() const;
  std::size_t atom_count() const;
  std::vector<std::size_t> neighbors(std::size_t i) const;
  std::size_t degree(std::size_t i) const { return neighbors(i).size(); }

  /// Flattened one-hot X [9*5] and A [9*9*5].
  std::vector<double> node_one_hot() const;
  std::vector<double> adjacency_one_hot() const;
  /// Inverse of the above; throws InvalidArgument if any row/fiber is not
  /// one-hot or the invariants fail.
  static MolecularGraph from_one_hot(std::span<const double> x, std::span<const double> a);

  /// Moves real atoms to the lowest slots, keeping their relative order.
  MolecularGraph compacted() const;

  bool operator==(const MolecularGraph&) const = default;

 private:
  std::array<Element, kMaxAtoms> atoms_;
  std::array<BondType, kMaxAtoms * kMaxAtoms> bonds_;
};

/// Pre-softmax generator output, flattened like the one-hot tensors.
struct DenseGraphLogits {
  std::vector<double> x = std::vector<double>(kMaxAtoms * kNodeTypes, 0.0);
  std::vector<double> a = std::vector<double>(kMaxAtoms * kMaxAtoms * kBondTypes, 0.0);
};

/// Softmax probabilities with the same layout as the one-hot tensors.
struct RelaxedGraph {
  std::vector<double> x;
  std::vector<double> a;
};

/// Symmetrizes A by averaging (i,j) and (j,i), takes the argmax of every row
/// and fiber (ties go to the lowest index), forces the diagonal to NONE and
/// drops bonds touching PAD atoms. Throws NumericError on non-finite logits.
MolecularGraph decode_logits(const DenseGraphLogits& logits);

/// Softmax of symmetrized logits; diagonal fibers are exactly NONE so that
/// argmax of the result reproduces decode_logits on every fiber.
RelaxedGraph relax(const DenseGraphLogits& logits);

/// Applies `perm` (new slot i holds old atom perm[i]) to atoms and bonds.
MolecularGraph permute(const MolecularGraph& g, std::span<const std::size_t> perm);
/// Seeded uniformly random permutation of all kMaxAtoms slots.
MolecularGraph random_permute(const MolecularGraph& g, std::uint64_t seed);
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

/// Compact human-readable dump for diagnostics.
std::string describe(const MolecularGraph& g);

}  // namespace qmg::mol
