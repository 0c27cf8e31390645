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

#include "qmg/mol/rings.hpp"

#include <algorithm>
#include <cstdint>

#include "qmg/mol/valence.hpp"

namespace qmg::mol {

namespace {

constexpr std::size_t N = kMaxAtoms;

std::size_t edge_bit(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return i * N + j;
}

using EdgeSet = std::array<std::uint64_t, 2>;

EdgeSet edges_of(const Ring& r) {
  EdgeSet s{};
  for (std::size_t k = 0; k < r.size(); ++k) {
    const auto b = edge_bit(r[k], r[(k + 1) % r.size()]);
    s[b / 64] |= std::uint64_t{1} << (b % 64);
  }
  return s;
}

void enumerate_from(const MolecularGraph& g, std::size_t start, std::vector<std::size_t>& path,
                    std::array<bool, N>& on_path, std::vector<Ring>& out) {
  const auto v = path.back();
  for (const auto w : g.neighbors(v)) {
    if (w == start && path.size() >= 3 && path[1] < path.back()) {
      out.push_back(path);
    } else if (w > start && !on_path[w]) {
      on_path[w] = true;
      path.push_back(w);
      enumerate_from(g, start, path, on_path, out);
      path.pop_back();
      on_path[w] = false;
    }
  }
}

// Electron contribution of a ring atom, or -1 if it cannot be aromatic.
int pi_electrons(const MolecularGraph& g, const RingInfo& rings, const std::array<int, N>& hydrogens, std::size_t i) {
  std::vector<std::size_t> doubles;
  for (const auto j : g.neighbors(i)) {
    const auto b = g.bond(i, j);
    if (b == BondType::TRIPLE || b == BondType::AROMATIC) return -1;
    if (b == BondType::DOUBLE) doubles.push_back(j);
  }
  if (doubles.size() > 1) return -1;
  if (doubles.size() == 1) {
    const auto j = doubles[0];
    if (rings.bond_in_ring(i, j)) return 1;
    return (g.atom(j) == Element::O || g.atom(j) == Element::N) ? 0 : -1;
  }
  switch (g.atom(i)) {
    case Element::N: return g.degree(i) + static_cast<std::size_t>(hydrogens[i]) <= 3 ? 2 : -1;
    case Element::O: return 2;
    default: return -1;
  }
}

}  // namespace

bool RingInfo::in_ring_of_size(std::size_t i, std::size_t size) const {
  for (const auto& r : sssr) {
    if (r.size() == size && std::find(r.begin(), r.end(), i) != r.end()) return true;
  }
  return false;
}

RingInfo find_rings(const MolecularGraph& g) {
  RingInfo info;
  for (const auto s : g.atom_indices()) {
    std::vector<std::size_t> path = {s};
    std::array<bool, N> on_path{};
    on_path[s] = true;
    enumerate_from(g, s, path, on_path, info.cycles);
  }
  std::stable_sort(info.cycles.begin(), info.cycles.end(),
                   [](const Ring& a, const Ring& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });

  std::size_t n_edges = 0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) n_edges += g.bond(i, j) != BondType::NONE;
  const std::size_t cyclomatic = n_edges + components(g).size() - g.atom_count();

  // Greedy GF(2) basis over edge incidence vectors, reduced by leading bit.
  std::vector<EdgeSet> basis;
  const auto reduce = [&](EdgeSet v) {
    for (const auto& b : basis) {
      const int lead = b[1] ? 64 + (63 - __builtin_clzll(b[1])) : 63 - __builtin_clzll(b[0]);
      if ((v[lead / 64] >> (lead % 64)) & 1u) {
        v[0] ^= b[0];
        v[1] ^= b[1];
      }
    }
    return v;
  };
  for (const auto& cyc : info.cycles) {
    if (info.sssr.size() == cyclomatic) break;
    const auto r = reduce(edges_of(cyc));
    if (r[0] == 0 && r[1] == 0) continue;
    basis.push_back(r);
    std::sort(basis.begin(), basis.end(), [](const EdgeSet& a, const EdgeSet& b) {
      return a[1] != b[1] ? a[1] > b[1] : a[0] > b[0];
    });
    info.sssr.push_back(cyc);
  }

  for (const auto& cyc : info.cycles) {
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const auto a = cyc[k], b = cyc[(k + 1) % cyc.size()];
      info.ring_bond[a * N + b] = info.ring_bond[b * N + a] = true;
    }
  }
  for (const auto& r : info.sssr) {
    for (const auto a : r) {
      ++info.sssr_count[a];
      const int size = static_cast<int>(r.size());
      if (info.smallest[a] == 0 || size < info.smallest[a]) info.smallest[a] = size;
    }
  }
  return info;
}

Aromaticity perceive_aromaticity(const MolecularGraph& kekule, const RingInfo& rings) {
  Aromaticity arom;
  const auto hydrogens = implicit_hydrogens(kekule);
  std::array<int, N> electrons;
  electrons.fill(-1);
  for (std::size_t i = 0; i < N; ++i) {
    if (kekule.atom(i) != Element::PAD && rings.atom_in_ring(i)) electrons[i] = pi_electrons(kekule, rings, hydrogens, i);
  }
  for (const auto& cyc : rings.cycles) {
    int total = 0;
    bool ok = true;
    for (const auto a : cyc) {
      if (electrons[a] < 0) {
        ok = false;
        break;
      }
      total += electrons[a];
    }
    if (!ok || total < 2 || (total - 2) % 4 != 0) continue;
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const auto a = cyc[k], b = cyc[(k + 1) % cyc.size()];
      arom.atom[a] = true;
      arom.bond[a * N + b] = arom.bond[b * N + a] = true;
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (arom.bond[i * N + j] && kekule.bond(i, j) == BondType::DOUBLE) arom.pi_atom[i] = true;
    }
  }
  return arom;
}

MolecularGraph aromatic_form(const MolecularGraph& kekule, const Aromaticity& arom) {
  MolecularGraph out = kekule;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      if (arom.bond_aromatic(i, j)) out.set_bond(i, j, BondType::AROMATIC);
    }
  return out;
}

}  // namespace qmg::mol
