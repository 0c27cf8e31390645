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
#include <string>
#include <vector>

#include "qmg/common/text.hpp"

namespace qmg::testing {

/// One row of the reference-toolkit property table.
struct OracleRow {
  std::string smiles;
  std::string canonical;
  double qed = 0, logp = 0, sa = 0, mw = 0;
  int hba = 0, hbd = 0;
  double tpsa = 0;
  int rotb = 0, arom = 0;
};

inline std::filesystem::path fixture_dir() { return QMG_FIXTURE_DIR; }

inline std::vector<OracleRow> load_oracle(const std::string& name = "qm9_oracle.csv") {
  const auto lines = read_lines(fixture_dir() / name);
  std::vector<OracleRow> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (trim(lines[k]).empty()) continue;
    const auto f = split(trim(lines[k]), ',');
    OracleRow r;
    r.smiles = f.at(0);
    r.canonical = f.at(1);
    r.qed = std::stod(f.at(2));
    r.logp = std::stod(f.at(3));
    r.sa = std::stod(f.at(4));
    r.mw = std::stod(f.at(5));
    r.hba = std::stoi(f.at(6));
    r.hbd = std::stoi(f.at(7));
    r.tpsa = std::stod(f.at(8));
    r.rotb = std::stoi(f.at(9));
    r.arom = std::stoi(f.at(10));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace qmg::testing
