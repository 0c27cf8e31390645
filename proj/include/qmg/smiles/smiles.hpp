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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmg/mol/graph.hpp"

namespace qmg::smiles {

enum class TokenKind { atom, bond, branch_open, branch_close, ring_digit, dot };

struct SmilesToken {
  TokenKind kind;
  std::string text;
  std::size_t position = 0;
};

/// Splits a SMILES string into tokens whose texts concatenate back to it.
/// Throws ParseError at the first unsupported character (brackets, other
/// elements, stereo marks, '%' closures).
std::vector<SmilesToken> tokenize(std::string_view s);

/// Parses the C/N/O/F subset: organic atoms (aromatic c, n, o), bonds
/// - = # :, branches, single-digit ring closures and '.'. Unmarked bonds are
/// SINGLE, or AROMATIC between two aromatic atoms.
///
/// Throws ParseError (with character offset) on empty input, unsupported
/// elements, unmatched ring digits or parentheses, more than 9 heavy atoms,
/// and valence violations.
mol::MolecularGraph parse(std::string_view s);

/// Depth-first SMILES of `g`. `order` lists atom slots by priority: the walk
/// starts at the first unvisited slot and visits neighbours in that order.
/// Ring closures take the lowest free digit. An empty order means slot
/// order. Throws InvalidArgument for graphs that fail valence_valid (with
/// connectivity not required).
std::string write(const mol::MolecularGraph& g, std::span<const std::size_t> order = {});

/// Key that is equal for two graphs exactly when they are the same molecule.
///
/// The graph is kekulized, aromatic rings are perceived, atoms are ranked on
/// the aromatic form (so the choice of Kekule structure does not matter) and
/// a deterministic Kekule structure is written in canonical order.
std::string canonical_smiles(const mol::MolecularGraph& g);

struct SmilesLine {
  std::size_t line = 0;
  std::string text;
};

/// Non-empty, non-comment lines of a SMILES-per-line file. Only the first
/// whitespace-separated field of each line is kept.
std::vector<SmilesLine> read_smiles_file(const std::filesystem::path& path);

}  // namespace qmg::smiles
