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

#include "qmg/mol/canon.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qmg/common/error.hpp"
#include "qmg/mol/valence.hpp"

namespace qmg::mol {

namespace {

struct Component {
  std::size_t m = 0;
  std::vector<int> label;
  std::vector<std::vector<int>> bond;  // type code, 0 = none
};

using Ranks = std::vector<int>;
using Code = std::vector<int>;

// Dense re-ranking of arbitrary comparable keys.
template <class Key>
Ranks dense_ranks(const std::vector<Key>& keys, int* n_classes) {
  std::vector<Key> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Ranks r(keys.size());
  for (std::size_t v = 0; v < keys.size(); ++v) {
    r[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[v]) - sorted.begin());
  }
  *n_classes = static_cast<int>(sorted.size());
  return r;
}

Ranks refine(const Component& c, Ranks ranks) {
  int classes = 0;
  {
    std::vector<int> tmp(ranks);
    dense_ranks(tmp, &classes);
  }
  while (true) {
    std::vector<std::pair<int, std::vector<std::pair<int, int>>>> keys(c.m);
    for (std::size_t v = 0; v < c.m; ++v) {
      keys[v].first = ranks[v];
      for (std::size_t w = 0; w < c.m; ++w) {
        if (c.bond[v][w] != 0) keys[v].second.emplace_back(ranks[w], c.bond[v][w]);
      }
      std::sort(keys[v].second.begin(), keys[v].second.end());
    }
    int next_classes = 0;
    Ranks next = dense_ranks(keys, &next_classes);
    if (next_classes == classes) return next;
    classes = next_classes;
    ranks = std::move(next);
  }
}

Code code_of(const Component& c, const std::vector<std::size_t>& order) {
  Code code;
  code.reserve(c.m + c.m * c.m / 2);
  for (const auto v : order) code.push_back(c.label[v]);
  for (std::size_t i = 0; i < c.m; ++i)
    for (std::size_t j = i + 1; j < c.m; ++j) code.push_back(c.bond[order[i]][order[j]]);
  return code;
}

void search(const Component& c, const Ranks& ranks, Code& best_code, std::vector<std::size_t>& best_order) {
  std::map<int, std::vector<std::size_t>> cells;
  for (std::size_t v = 0; v < c.m; ++v) cells[ranks[v]].push_back(v);
  const std::vector<std::size_t>* tied = nullptr;
  for (const auto& [r, members] : cells) {
    if (members.size() > 1) {
      tied = &members;
      break;
    }
  }
  if (tied == nullptr) {
    std::vector<std::size_t> order(c.m);
    for (std::size_t v = 0; v < c.m; ++v) order[static_cast<std::size_t>(ranks[v])] = v;
    Code code = code_of(c, order);
    if (best_order.empty() || code < best_code) {
      best_code = std::move(code);
      best_order = std::move(order);
    }
    return;
  }
  for (const auto v : *tied) {
    std::vector<std::pair<int, int>> keys(c.m);
    for (std::size_t u = 0; u < c.m; ++u) keys[u] = {ranks[u], u == v ? 0 : 1};
    int n = 0;
    search(c, refine(c, dense_ranks(keys, &n)), best_code, best_order);
  }
}

Component make_component(const MolecularGraph& g, const std::vector<std::size_t>& atoms, std::span<const int> labels) {
  Component c;
  c.m = atoms.size();
  c.label.resize(c.m);
  c.bond.assign(c.m, std::vector<int>(c.m, 0));
  for (std::size_t a = 0; a < c.m; ++a) {
    c.label[a] = labels.empty() ? static_cast<int>(g.atom(atoms[a])) : labels[atoms[a]];
    for (std::size_t b = 0; b < c.m; ++b) c.bond[a][b] = static_cast<int>(g.bond(atoms[a], atoms[b]));
  }
  return c;
}

Ranks initial_ranks(const Component& c) {
  std::vector<std::tuple<int, int, std::vector<int>>> init(c.m);
  for (std::size_t v = 0; v < c.m; ++v) {
    std::vector<int> types;
    for (std::size_t w = 0; w < c.m; ++w) {
      if (c.bond[v][w] != 0) types.push_back(c.bond[v][w]);
    }
    std::sort(types.begin(), types.end());
    init[v] = {c.label[v], static_cast<int>(types.size()), std::move(types)};
  }
  int n = 0;
  return refine(c, dense_ranks(init, &n));
}

// Canonical order and code of one connected component (slots in `atoms`).
std::pair<std::vector<std::size_t>, Code> canonicalize_component(const MolecularGraph& g,
                                                                 const std::vector<std::size_t>& atoms,
                                                                 std::span<const int> labels) {
  const Component c = make_component(g, atoms, labels);
  Code best_code;
  std::vector<std::size_t> best_order;
  search(c, initial_ranks(c), best_code, best_order);
  std::vector<std::size_t> slots(c.m);
  for (std::size_t k = 0; k < c.m; ++k) slots[k] = atoms[best_order[k]];
  return {std::move(slots), std::move(best_code)};
}

}  // namespace

std::vector<std::size_t> canonical_order(const MolecularGraph& g, std::span<const int> atom_labels) {
  if (!atom_labels.empty() && atom_labels.size() != kMaxAtoms) {
    throw InvalidArgument("canonical_order: atom_labels must cover every slot");
  }
  std::vector<std::pair<std::vector<std::size_t>, Code>> parts;
  for (const auto& comp : components(g)) parts.push_back(canonicalize_component(g, comp, atom_labels));
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.second < b.second;
  });
  std::vector<std::size_t> order;
  for (const auto& p : parts) order.insert(order.end(), p.first.begin(), p.first.end());
  return order;
}

std::array<std::size_t, kMaxAtoms> canonical_ranks(const MolecularGraph& g, std::span<const int> atom_labels) {
  const auto order = canonical_order(g, atom_labels);
  std::array<std::size_t, kMaxAtoms> ranks{};
  std::size_t next = 0;
  for (const auto v : order) ranks[v] = next++;
  for (std::size_t i = 0; i < kMaxAtoms; ++i) {
    if (g.atom(i) == Element::PAD) ranks[i] = next++;
  }
  return ranks;
}

std::array<int, kMaxAtoms> symmetry_classes(const MolecularGraph& g, std::span<const int> atom_labels) {
  if (!atom_labels.empty() && atom_labels.size() != kMaxAtoms) {
    throw InvalidArgument("symmetry_classes: atom_labels must cover every slot");
  }
  std::array<int, kMaxAtoms> out;
  out.fill(-1);
  const auto atoms = g.atom_indices();
  if (atoms.empty()) return out;
  const Component c = make_component(g, atoms, atom_labels);
  const Ranks r = initial_ranks(c);
  for (std::size_t a = 0; a < atoms.size(); ++a) out[atoms[a]] = r[a];
  return out;
}

}  // namespace qmg::mol
