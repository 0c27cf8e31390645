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
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qmg/chem/rewards.hpp"
#include "qmg/chem/sa.hpp"
#include "qmg/common/rng.hpp"
#include "qmg/mol/graph.hpp"

namespace qmg::pipeline {

/// Memoized chemistry of valid molecules, keyed on canonical SMILES.
class MoleculeCache {
 public:
  struct Entry {
    std::string key;
    chem::PropertyScores scores;
    chem::EnvironmentCounts fingerprint;
  };

  /// `g` must pass valence_valid.
  const Entry& get(const mol::MolecularGraph& g);
  chem::PropertyScores scores(const mol::MolecularGraph& g) { return get(g).scores; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, Entry> entries_;
};

struct MetricsReport {
  std::size_t epoch = 0;
  std::size_t samples = 0;
  std::size_t valid = 0;
  double validity = 0.0;    // percent of samples
  double uniqueness = 0.0;  // percent of valid
  double novelty = 0.0;     // percent of unique
  double diversity = 0.0;   // 1 - mean pairwise Tanimoto over valid
  double qed = 0.0;         // mean normalized scores over valid
  double sa = 0.0;
  double logp = 0.0;
  double average = 0.0;  // mean of qed, sa, logp
  /// Set when no sample was valid; every rate is then 0.
  bool empty_valid_set = false;
};

/// Diversity uses every pair when there are at most `max_pairs`, otherwise
/// `max_pairs` random pairs of distinct indices drawn from `rng`.
MetricsReport evaluate_graphs(std::span<const mol::MolecularGraph> graphs, const std::set<std::string>& training_keys,
                              MoleculeCache& cache, Rng& rng, std::size_t max_pairs = 10000);

inline constexpr const char* kMetricsHeader = "epoch,validity,uniqueness,novelty,diversity,qed,sa,logp,average";
std::string metrics_row(const MetricsReport& r);

/// metrics.csv writer. Every append rewrites the file through a temporary
/// file and a rename, so a crash never leaves a partial row.
class MetricsLog {
 public:
  /// Keeps existing rows whose epoch is below `first_epoch` (for resumed
  /// runs) and drops the rest.
  MetricsLog(std::filesystem::path path, std::size_t first_epoch);
  void append(const MetricsReport& r);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<std::string> rows_;
};

}  // namespace qmg::pipeline
