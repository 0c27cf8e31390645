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

#include "qmg/chem/sa.hpp"
#include "qmg/chem/tables.hpp"
#include "qmg/mol/graph.hpp"

namespace qmg::chem {

/// LogP range mapped onto [0, 1].
struct NormalizationRange {
  double logp_min = -2.12;
  double logp_max = 6.04;
};

struct PropertyScores {
  double qed_raw = 0.0;
  double logp_raw = 0.0;
  double sa_raw = 10.0;
  double qed_norm = 0.0;
  double logp_norm = 0.0;
  double sa_norm = 0.0;
};

/// Fills the normalized fields: qed passes through, logp is min-max scaled
/// and sa is (10 - sa) / 9, all clamped to [0, 1].
PropertyScores normalize_rewards(PropertyScores p, const NormalizationRange& range = {});

/// Raw and normalized scores of a valid graph.
PropertyScores score_molecule(const mol::MolecularGraph& g, const ChemTables& tables = default_chem_tables(),
                              const FragmentTable& fragments = default_fragment_table(),
                              const NormalizationRange& range = {});

}  // namespace qmg::chem
