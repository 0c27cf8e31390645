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
#include <map>
#include <string>
#include <vector>

#include "qmg/chem/pattern.hpp"

namespace qmg::chem {

struct PatternEntry {
  Pattern pattern;
  double value = 0.0;
  std::string label;
};

/// Parameter tables read from the data directory.
struct ChemTables {
  /// Wildman-Crippen atom types, first match wins.
  std::vector<PatternEntry> crippen;
  /// Polar surface fragments for N and O, first match wins.
  std::vector<PatternEntry> tpsa;
  /// Desirability parameters keyed "<DESCRIPTOR>.<A..F|DMAX|WEIGHT>".
  std::map<std::string, double> qed;
  /// Structural alerts; `label` holds the alert group.
  std::vector<PatternEntry> alerts;

  double qed_param(const std::string& key) const;
};

/// Directory holding the shipped tables and dataset. The QMG_DATA_DIR
/// environment variable overrides the build-time location.
std::filesystem::path data_dir();

/// Loads crippen.tsv, tpsa.tsv, qed_params.tsv and alerts.tsv. Throws
/// IoError on a missing or corrupt file and ParseError on a bad pattern.
ChemTables load_chem_tables(const std::filesystem::path& dir = data_dir());

/// Tables from data_dir(), loaded once.
const ChemTables& default_chem_tables();

}  // namespace qmg::chem
