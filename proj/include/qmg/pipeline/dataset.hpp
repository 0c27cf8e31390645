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
#include <set>
#include <string>
#include <vector>

#include "qmg/mol/graph.hpp"

namespace qmg::pipeline {

struct FilterStats {
  std::size_t lines = 0;
  std::size_t kept = 0;
  std::size_t size = 0;       // more than 9 heavy atoms
  std::size_t element = 0;    // outside C, N, O, F (or charged, bracketed)
  std::size_t malformed = 0;  // other parse failures
  std::size_t valence = 0;    // valence violations or disconnected
  std::size_t duplicate = 0;  // same canonical SMILES as an earlier line
};

struct Dataset {
  std::vector<mol::MolecularGraph> graphs;
  std::vector<std::string> keys;  // canonical SMILES, parallel to graphs
  std::filesystem::path source;
  FilterStats stats;
  /// One line per dropped molecule: "<line>: <reason>: <smiles>".
  std::vector<std::string> log;

  std::size_t size() const { return graphs.size(); }
  std::set<std::string> key_set() const { return {keys.begin(), keys.end()}; }
  /// Entries [begin, begin + count), clamped to the dataset.
  Dataset slice(std::size_t begin, std::size_t count) const;
};

/// Reads a SMILES-per-line file (first field per line, '#' comments) and
/// keeps valid, connected molecules of at most 9 C/N/O/F atoms, dropping
/// canonical duplicates. Throws IoError if unreadable and InvalidArgument if
/// nothing survives.
Dataset ingest(const std::filesystem::path& path);

/// The bundled QM9 subset.
std::filesystem::path default_dataset_path();

}  // namespace qmg::pipeline
