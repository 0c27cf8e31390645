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

#include "qmg/mol/valence.hpp"

#include <functional>

namespace qmg::mol {

namespace {

constexpr std::size_t N = kMaxAtoms;

bool reachable_without(const MolecularGraph& g, std::size_t from, std::size_t to, std::size_t skip_a, std::size_t skip_b) {
  std::array<bool, N> seen{};
  std::vector<std::size_t> stack = {from};
  seen[from] = true;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (const auto w : g.neighbors(v)) {
      if ((v == skip_a && w == skip_b) || (v == skip_b && w == skip_a)) continue;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

bool has_aromatic_bond(const MolecularGraph& g, std::size_t i) {
  for (std::size_t j = 0; j < N; ++j) {
    if (g.bond(i, j) == BondType::AROMATIC) return true;
  }
  return false;
}

// Perfect matching of `needs` atoms over aromatic bonds, lowest slot first.
bool match(const MolecularGraph& g, const std::array<bool, N>& needs, std::array<int, N>& mate) {
  std::size_t v = N;
  for (std::size_t i = 0; i < N; ++i) {
    if (needs[i] && mate[i] < 0) {
      v = i;
      break;
    }
  }
  if (v == N) return true;
  for (std::size_t w = 0; w < N; ++w) {
    if (w == v || !needs[w] || mate[w] >= 0 || g.bond(v, w) != BondType::AROMATIC) continue;
    mate[v] = static_cast<int>(w);
    mate[w] = static_cast<int>(v);
    if (match(g, needs, mate)) return true;
    mate[v] = mate[w] = -1;
  }
  return false;
}

}  // namespace

std::array<bool, N> atoms_needing_double(const MolecularGraph& g) {
  std::array<bool, N> needs{};
  for (std::size_t i = 0; i < N; ++i) {
    const Element e = g.atom(i);
    if ((e != Element::C && e != Element::N) || !has_aromatic_bond(g, i)) continue;
    int used = 0;
    bool other_multiple = false;
    for (std::size_t j = 0; j < N; ++j) {
      const auto b = g.bond(i, j);
      used += bond_order(b);
      other_multiple = other_multiple || b == BondType::DOUBLE || b == BondType::TRIPLE;
    }
    needs[i] = !other_multiple && max_valence(e) - used >= 1;
  }
  return needs;
}

std::optional<MolecularGraph> kekulize(const MolecularGraph& g) { return kekulize(g, atoms_needing_double(g)); }

std::optional<MolecularGraph> kekulize(const MolecularGraph& g, const std::array<bool, N>& needs_double) {
  std::array<int, N> mate;
  mate.fill(-1);
  if (!match(g, needs_double, mate)) return std::nullopt;
  MolecularGraph out = g;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      if (g.bond(i, j) != BondType::AROMATIC) continue;
      out.set_bond(i, j, mate[i] == static_cast<int>(j) ? BondType::DOUBLE : BondType::SINGLE);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> components(const MolecularGraph& g) {
  std::array<bool, N> seen{};
  std::vector<std::vector<std::size_t>> out;
  for (const auto start : g.atom_indices()) {
    if (seen[start]) continue;
    std::vector<std::size_t> comp;
    std::vector<std::size_t> stack = {start};
    seen[start] = true;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const auto w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool is_connected(const MolecularGraph& g) { return components(g).size() <= 1; }

std::array<int, N> implicit_hydrogens(const MolecularGraph& kekule) {
  std::array<int, N> h{};
  for (std::size_t i = 0; i < N; ++i) {
    if (kekule.atom(i) == Element::PAD) continue;
    int used = 0;
    for (std::size_t j = 0; j < N; ++j) used += bond_order(kekule.bond(i, j));
    h[i] = std::max(0, max_valence(kekule.atom(i)) - used);
  }
  return h;
}

ValenceReport valence_valid(const MolecularGraph& g, bool require_connected) {
  ValenceReport report;
  const auto atoms = g.atom_indices();
  if (atoms.empty()) report.problems.push_back("graph has no atoms");

  bool aromatic_ok = true;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      if (g.bond(i, j) != BondType::AROMATIC) continue;
      for (const auto k : {i, j}) {
        if (g.atom(k) == Element::F) {
          report.problems.push_back("atom " + std::to_string(k) + " (F) has an aromatic bond");
          aromatic_ok = false;
        }
      }
      if (!reachable_without(g, i, j, i, j)) {
        report.problems.push_back("aromatic bond " + std::to_string(i) + "-" + std::to_string(j) + " is not in a ring");
        aromatic_ok = false;
      }
    }
  }

  std::optional<MolecularGraph> kek;
  if (aromatic_ok) {
    kek = kekulize(g);
    if (!kek) report.problems.push_back("aromatic bonds admit no Kekule assignment");
  }
  const MolecularGraph& view = kek ? *kek : g;
  for (const auto i : atoms) {
    int used = 0;
    for (std::size_t j = 0; j < N; ++j) used += bond_order(view.bond(i, j));
    report.used[i] = used;
    if (used > max_valence(g.atom(i))) {
      report.problems.push_back("atom " + std::to_string(i) + " (" + element_symbol(g.atom(i)) + ") uses valence " +
                                std::to_string(used) + " > " + std::to_string(max_valence(g.atom(i))));
    }
  }
  if (require_connected && !is_connected(g)) report.problems.push_back("atoms form more than one component");

  report.valid = report.problems.empty();
  if (report.valid) report.implicit_h = implicit_hydrogens(view);
  return report;
}

}  // namespace qmg::mol
