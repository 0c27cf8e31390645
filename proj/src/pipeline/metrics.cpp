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

#include "qmg/pipeline/metrics.hpp"

#include <cstdio>

#include "qmg/common/text.hpp"
#include "qmg/mol/valence.hpp"
#include "qmg/smiles/smiles.hpp"

namespace qmg::pipeline {

const MoleculeCache::Entry& MoleculeCache::get(const mol::MolecularGraph& g) {
  auto key = smiles::canonical_smiles(g);
  const auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  Entry e{key, chem::score_molecule(g), chem::atom_environments(g)};
  return entries_.emplace(std::move(key), std::move(e)).first->second;
}

MetricsReport evaluate_graphs(std::span<const mol::MolecularGraph> graphs, const std::set<std::string>& training_keys,
                              MoleculeCache& cache, Rng& rng, std::size_t max_pairs) {
  MetricsReport r;
  r.samples = graphs.size();
  std::vector<const MoleculeCache::Entry*> valid;
  for (const auto& g : graphs) {
    if (mol::valence_valid(g).valid) valid.push_back(&cache.get(g));
  }
  r.valid = valid.size();
  if (valid.empty()) {
    r.empty_valid_set = true;
    return r;
  }
  r.validity = 100.0 * static_cast<double>(valid.size()) / static_cast<double>(graphs.size());
  std::set<std::string> unique;
  for (const auto* e : valid) unique.insert(e->key);
  r.uniqueness = 100.0 * static_cast<double>(unique.size()) / static_cast<double>(valid.size());
  std::size_t novel = 0;
  for (const auto& k : unique) novel += training_keys.count(k) == 0;
  r.novelty = 100.0 * static_cast<double>(novel) / static_cast<double>(unique.size());

  const std::size_t n = valid.size();
  const std::size_t all_pairs = n * (n - 1) / 2;
  double sim = 0.0;
  std::size_t pairs = 0;
  if (all_pairs <= max_pairs) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) sim += chem::tanimoto(valid[i]->fingerprint, valid[j]->fingerprint);
    pairs = all_pairs;
  } else {
    for (; pairs < max_pairs; ++pairs) {
      const auto i = rng.below(n);
      auto j = rng.below(n - 1);
      if (j >= i) ++j;
      sim += chem::tanimoto(valid[i]->fingerprint, valid[j]->fingerprint);
    }
  }
  r.diversity = pairs == 0 ? 0.0 : 1.0 - sim / static_cast<double>(pairs);

  for (const auto* e : valid) {
    r.qed += e->scores.qed_norm;
    r.sa += e->scores.sa_norm;
    r.logp += e->scores.logp_norm;
  }
  const auto nv = static_cast<double>(n);
  r.qed /= nv;
  r.sa /= nv;
  r.logp /= nv;
  r.average = (r.qed + r.sa + r.logp) / 3.0;
  return r;
}

std::string metrics_row(const MetricsReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%.4f,%.4f,%.4f,%.6f,%.6f,%.6f,%.6f,%.6f", r.epoch, r.validity, r.uniqueness,
                r.novelty, r.diversity, r.qed, r.sa, r.logp, r.average);
  return buf;
}

MetricsLog::MetricsLog(std::filesystem::path path, std::size_t first_epoch) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  const auto lines = read_lines(path_);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto comma = lines[i].find(',');
    if (std::stoul(lines[i].substr(0, comma)) < first_epoch) rows_.push_back(lines[i]);
  }
}

void MetricsLog::append(const MetricsReport& r) {
  rows_.push_back(metrics_row(r));
  std::string text = std::string(kMetricsHeader) + "\n";
  for (const auto& row : rows_) text += row + "\n";
  write_file_atomic(path_, text);
}

}  // namespace qmg::pipeline
