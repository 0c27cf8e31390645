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

#include "qmg/chem/sa.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "qmg/chem/tables.hpp"
#include "qmg/common/error.hpp"
#include "qmg/mol/canon.hpp"
#include "qmg/smiles/smiles.hpp"

namespace qmg::chem {

using mol::kMaxAtoms;

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finaliser over a running combination
  std::uint64_t x = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

using BondSet = std::uint64_t;  // bit per heavy-atom pair (i < j), at most 36 pairs


}  // namespace

EnvironmentCounts atom_environments(const ChemView& v, int radius) {
  const std::size_t n = v.heavy_count;
  // Dense bond index for the bond-set bitmasks.
  std::vector<std::vector<int>> bond_id(n, std::vector<int>(n, -1));
  int next = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& b : v.bonds[i]) {
      if (b.other < n && b.other > i) bond_id[i][b.other] = bond_id[b.other][i] = next++;
    }

  EnvironmentCounts out;
  std::vector<std::uint64_t> ids(n);
  std::vector<BondSet> cover(n, 0);
  std::set<BondSet> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v.atoms[i];
    std::uint64_t h = mix(0, static_cast<std::uint64_t>(a.z));
    h = mix(h, static_cast<std::uint64_t>(a.degree));
    h = mix(h, static_cast<std::uint64_t>(a.total_h));
    h = mix(h, a.ring_count > 0 ? 1u : 0u);
    ids[i] = h;
    ++out[h];
  }
  std::vector<bool> active(n, true);
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next_ids(n);
    std::vector<BondSet> next_cover(n);
    std::vector<std::pair<BondSet, std::uint64_t>> round;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<int, std::uint64_t>> nb;
      BondSet c = cover[i];
      for (const auto& b : v.bonds[i]) {
        if (b.other >= n) continue;
        nb.emplace_back(static_cast<int>(b.type), ids[b.other]);
        c |= BondSet{1} << bond_id[i][b.other];
        c |= cover[b.other];
      }
      std::sort(nb.begin(), nb.end());
      std::uint64_t h = mix(static_cast<std::uint64_t>(r), ids[i]);
      for (const auto& [t, id] : nb) h = mix(mix(h, static_cast<std::uint64_t>(t)), id);
      next_ids[i] = h;
      next_cover[i] = c;
      if (active[i]) round.emplace_back(c, h);
    }
    // Drop environments whose bond set was already covered.
    std::sort(round.begin(), round.end());
    for (std::size_t k = 0; k < round.size(); ++k) {
      const auto& [c, h] = round[k];
      if (c == 0 || seen.count(c) || (k > 0 && round[k - 1].first == c)) continue;
      ++out[h];
    }
    for (const auto& [c, h] : round) seen.insert(c);
    for (std::size_t i = 0; i < n; ++i) {
      if (next_cover[i] == cover[i]) active[i] = false;
    }
    ids = std::move(next_ids);
    cover = std::move(next_cover);
  }
  return out;
}

EnvironmentCounts atom_environments(const mol::MolecularGraph& g, int radius) {
  return atom_environments(perceive(g), radius);
}

double tanimoto(const EnvironmentCounts& a, const EnvironmentCounts& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first == ib->first) {
      ++common;
      ++ia;
      ++ib;
    } else if (ia->first < ib->first) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double FragmentTable::lookup(std::uint64_t id) const {
  const auto it = score.find(id);
  return it == score.end() ? unknown_score : it->second;
}

FragmentTable build_fragment_table(std::span<const mol::MolecularGraph> corpus) {
  std::map<std::uint64_t, long> counts;
  long total = 0;
  for (const auto& g : corpus) {
    for (const auto& [id, c] : atom_environments(g)) {
      counts[id] += c;
      total += c;
    }
  }
  if (counts.empty()) throw InvalidArgument("build_fragment_table: corpus has no fragments");
  std::vector<long> sorted;
  for (const auto& [id, c] : counts) sorted.push_back(c);
  std::sort(sorted.rbegin(), sorted.rend());
  long running = 0;
  long c80 = sorted.back();
  for (const auto c : sorted) {
    running += c;
    if (static_cast<double>(running) >= 0.8 * static_cast<double>(total)) {
      c80 = c;
      break;
    }
  }
  FragmentTable t;
  t.c80 = static_cast<double>(c80);
  t.unknown_score = std::log10(1.0 / t.c80) - 1.0;
  t.molecules = corpus.size();
  for (const auto& [id, c] : counts) t.score[id] = std::log10(static_cast<double>(c) / t.c80);
  return t;
}

const FragmentTable& default_fragment_table() {
  static const FragmentTable table = [] {
    std::vector<mol::MolecularGraph> corpus;
    for (const auto& line : smiles::read_smiles_file(data_dir() / "qm9_subset.smi")) {
      corpus.push_back(smiles::parse(line.text));
    }
    return build_fragment_table(corpus);
  }();
  return table;
}

ComplexityCounts complexity_counts(const ChemView& v) {
  ComplexityCounts c;
  c.atoms = static_cast<int>(v.heavy_count);
  std::array<int, kMaxAtoms> labels{};
  for (std::size_t i = 0; i < v.heavy_count; ++i) labels[v.atoms[i].slot] = v.atoms[i].z;
  const auto classes = mol::symmetry_classes(v.aromatic_form, labels);
  const auto conjugated = [&](std::size_t i) {
    for (const auto& b : v.bonds[i]) {
      for (const auto& nb : v.bonds[b.other]) {
        if (nb.type != mol::BondType::SINGLE) return true;
      }
    }
    return false;
  };
  // Ring pairs range over the SSSR plus cycles that are the sum of two SSSR
  // rings and as large as the larger of them (the symmetric alternatives).
  const auto bond_set = [](const mol::Ring& r) {
    std::set<std::pair<std::size_t, std::size_t>> s;
    for (std::size_t k = 0; k < r.size(); ++k) s.insert(std::minmax(r[k], r[(k + 1) % r.size()]));
    return s;
  };
  const auto& sssr = v.rings.sssr;
  std::vector<mol::Ring> rings = sssr;
  for (const auto& cyc : v.rings.cycles) {
    if (std::find(sssr.begin(), sssr.end(), cyc) != sssr.end()) continue;
    const auto bc = bond_set(cyc);
    bool sum_of_two = false;
    for (std::size_t p = 0; p < sssr.size() && !sum_of_two; ++p) {
      for (std::size_t q = p + 1; q < sssr.size() && !sum_of_two; ++q) {
        if (std::max(sssr[p].size(), sssr[q].size()) != cyc.size()) continue;
        const auto bp = bond_set(sssr[p]), bq = bond_set(sssr[q]);
        std::set<std::pair<std::size_t, std::size_t>> x;
        std::set_symmetric_difference(bp.begin(), bp.end(), bq.begin(), bq.end(), std::inserter(x, x.end()));
        sum_of_two = x == bc;
      }
    }
    if (sum_of_two) rings.push_back(cyc);
  }
  std::set<std::size_t> spiro, bridge;
  for (std::size_t p = 0; p < rings.size(); ++p) {
    const auto bp = bond_set(rings[p]);
    for (std::size_t q = p + 1; q < rings.size(); ++q) {
      const auto bq = bond_set(rings[q]);
      std::vector<std::pair<std::size_t, std::size_t>> shared;
      std::set_intersection(bp.begin(), bp.end(), bq.begin(), bq.end(), std::back_inserter(shared));
      if (shared.empty()) {
        std::vector<std::size_t> common;
        for (const auto x : rings[p]) {
          if (std::find(rings[q].begin(), rings[q].end(), x) != rings[q].end()) common.push_back(x);
        }
        if (common.size() == 1) spiro.insert(common[0]);
      } else if (shared.size() > 1) {
        std::map<std::size_t, int> ends;
        for (const auto& [x, y] : shared) {
          ++ends[x];
          ++ends[y];
        }
        for (const auto& [x, k] : ends) {
          if (k == 1) bridge.insert(x);
        }
      }
    }
  }
  for (std::size_t i = 0; i < v.heavy_count; ++i) {
    const auto& a = v.atoms[i];
    if (a.aromatic || a.total_h > 1) continue;
    // sp3 carbon, or an unconjugated N held in a three-membered ring or at
    // a bridgehead.
    const bool carbon = a.z == 6 && a.degree + a.total_h == 4;
    const bool nitrogen = a.z == 7 && a.degree == 3 && !conjugated(i) &&
                          (v.rings.in_ring_of_size(a.slot, 3) || bridge.count(a.slot) > 0);
    if (!carbon && !nitrogen) continue;
    if (std::any_of(v.bonds[i].begin(), v.bonds[i].end(),
                    [](const ChemBond& b) { return b.type != mol::BondType::SINGLE; })) {
      continue;
    }
    std::set<int> distinct;
    for (const auto& b : v.bonds[i]) distinct.insert(classes[v.atoms[b.other].slot]);
    if (a.total_h == 1) distinct.insert(-1);
    c.stereocentres += distinct.size() == (carbon ? 4u : 3u) ? 1 : 0;
  }

  for (const auto& r : v.rings.sssr) c.macrocycles += r.size() > 8 ? 1 : 0;
  c.spiro = static_cast<int>(spiro.size());
  c.bridgeheads = static_cast<int>(bridge.size());
  return c;
}

double sa_score(const mol::MolecularGraph& g, const FragmentTable& table) {
  if (table.score.empty()) throw InvalidArgument("sa_score: empty fragment table");
  const auto v = perceive(g);
  const auto env = atom_environments(v);
  double frag = 0.0;
  int nf = 0;
  for (const auto& [id, count] : env) {
    frag += table.lookup(id) * count;
    nf += count;
  }
  frag /= nf;

  const auto cc = complexity_counts(v);
  const double n = cc.atoms;
  const double size_penalty = std::pow(n, 1.005) - n;
  const double stereo_penalty = std::log10(cc.stereocentres + 1.0);
  const double spiro_penalty = std::log10(cc.spiro + 1.0);
  const double bridge_penalty = std::log10(cc.bridgeheads + 1.0);
  const double macro_penalty = cc.macrocycles > 0 ? std::log10(2.0) : 0.0;
  const double complexity = -size_penalty - stereo_penalty - spiro_penalty - bridge_penalty - macro_penalty;
  const double distinct = static_cast<double>(env.size());
  const double symmetry = n > distinct ? 0.5 * std::log(n / distinct) : 0.0;

  constexpr double lo = -4.0, hi = 2.5;
  double s = 11.0 - (frag + complexity + symmetry - lo + 1.0) / (hi - lo) * 9.0;
  if (s > 8.0) s = 8.0 + std::log(s + 1.0 - 9.0);
  return std::clamp(s, 1.0, 10.0);
}

}  // namespace qmg::chem
