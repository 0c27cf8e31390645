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

#include "qmg/chem/tables.hpp"

#include <cstdlib>

#include "qmg/common/error.hpp"
#include "qmg/common/text.hpp"

namespace qmg::chem {

namespace {

std::vector<PatternEntry> load_patterns(const std::filesystem::path& path, bool has_value) {
  const auto table = load_data_table(path);
  std::vector<PatternEntry> out;
  for (const auto& row : table.rows) {
    if (row.size() < 2) throw IoError(path.string() + ": expected at least two columns");
    PatternEntry e{Pattern::compile(row[0]), 0.0, has_value ? (row.size() > 2 ? row[2] : "") : row[1]};
    if (has_value) e.value = std::stod(row[1]);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

double ChemTables::qed_param(const std::string& key) const {
  const auto it = qed.find(key);
  if (it == qed.end()) throw InvalidArgument("missing QED parameter " + key);
  return it->second;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("QMG_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return QMG_DATA_DIR;
}

ChemTables load_chem_tables(const std::filesystem::path& dir) {
  ChemTables t;
  t.crippen = load_patterns(dir / "crippen.tsv", true);
  t.tpsa = load_patterns(dir / "tpsa.tsv", true);
  t.alerts = load_patterns(dir / "alerts.tsv", false);
  for (const auto& row : load_data_table(dir / "qed_params.tsv").rows) {
    if (row.size() != 2) throw IoError("qed_params.tsv: expected key<TAB>value");
    t.qed[row[0]] = std::stod(row[1]);
  }
  return t;
}

const ChemTables& default_chem_tables() {
  static const ChemTables tables = load_chem_tables();
  return tables;
}

}  // namespace qmg::chem
