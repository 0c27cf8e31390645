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

#include "qmg/chem/rewards.hpp"

#include <algorithm>

#include "qmg/chem/properties.hpp"
#include "qmg/common/error.hpp"

namespace qmg::chem {

PropertyScores normalize_rewards(PropertyScores p, const NormalizationRange& range) {
  if (!(range.logp_max > range.logp_min)) throw InvalidArgument("normalize_rewards: empty logp range");
  p.qed_norm = std::clamp(p.qed_raw, 0.0, 1.0);
  p.logp_norm = std::clamp((p.logp_raw - range.logp_min) / (range.logp_max - range.logp_min), 0.0, 1.0);
  p.sa_norm = std::clamp((10.0 - p.sa_raw) / 9.0, 0.0, 1.0);
  return p;
}

PropertyScores score_molecule(const mol::MolecularGraph& g, const ChemTables& tables, const FragmentTable& fragments,
                              const NormalizationRange& range) {
  const auto d = compute_descriptors(g, tables);
  PropertyScores p;
  p.qed_raw = qed_score(d, tables);
  p.logp_raw = d.logp;
  p.sa_raw = sa_score(g, fragments);
  return normalize_rewards(p, range);
}

}  // namespace qmg::chem
