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

#include "qmg/mol/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmg/common/error.hpp"
#include "qmg/common/rng.hpp"

namespace qmg::mol {

namespace {

constexpr std::size_t N = kMaxAtoms;
constexpr std::size_t D = kNodeTypes;
constexpr std::size_t B = kBondTypes;

std::size_t argmax_lowest(const double* v, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

void softmax_into(const double* in, double* out, std::size_t n) {
  const double mx = *std::max_element(in, in + n);
  double z = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::exp(in[k] - mx);
    z += out[k];
  }
  for (std::size_t k = 0; k < n; ++k) out[k] /= z;
}

void check_logits(const DenseGraphLogits& logits) {
  if (logits.x.size() != N * D || logits.a.size() != N * N * B) {
    throw ShapeError("graph logits must have sizes " + std::to_string(N * D) + " and " + std::to_string(N * N * B));
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(logits.x.begin(), logits.x.end(), finite) || !std::all_of(logits.a.begin(), logits.a.end(), finite)) {
    throw NumericError("graph logits contain non-finite values");
  }
}

std::vector<double> symmetrized(const std::vector<double>& a) {
  std::vector<double> s(a.size());
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < B; ++k) s[(i * N + j) * B + k] = 0.5 * (a[(i * N + j) * B + k] + a[(j * N + i) * B + k]);
  return s;
}

}  // namespace

int max_valence(Element e) {
  switch (e) {
    case Element::C: return 4;
    case Element::N: return 3;
    case Element::O: return 2;
    case Element::F: return 1;
    case Element::PAD: return 0;
  }
  return 0;
}

char element_symbol(Element e) {
  switch (e) {
    case Element::C: return 'C';
    case Element::N: return 'N';
    case Element::O: return 'O';
    case Element::F: return 'F';
    case Element::PAD: return '*';
  }
  return '?';
}

int bond_order(BondType b) {
  switch (b) {
    case BondType::NONE: return 0;
    case BondType::SINGLE: return 1;
    case BondType::DOUBLE: return 2;
    case BondType::TRIPLE: return 3;
    case BondType::AROMATIC: return 1;
  }
  return 0;
}

MolecularGraph::MolecularGraph() {
  atoms_.fill(Element::PAD);
  bonds_.fill(BondType::NONE);
}

void MolecularGraph::set_atom(std::size_t i, Element e) {
  if (i >= N) throw InvalidArgument("atom index out of range");
  if (e == Element::PAD) {
    for (std::size_t j = 0; j < N; ++j) {
      bonds_[i * N + j] = BondType::NONE;
      bonds_[j * N + i] = BondType::NONE;
    }
  }
  atoms_[i] = e;
}

void MolecularGraph::set_bond(std::size_t i, std::size_t j, BondType b) {
  if (i >= N || j >= N) throw InvalidArgument("bond index out of range");
  if (i == j) {
    if (b != BondType::NONE) throw InvalidArgument("self bonds are not allowed");
    return;
  }
  if (b != BondType::NONE && (atoms_[i] == Element::PAD || atoms_[j] == Element::PAD)) {
    throw InvalidArgument("bond to a PAD slot");
  }
  bonds_[i * N + j] = b;
  bonds_[j * N + i] = b;
}

std::vector<std::size_t> MolecularGraph::atom_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < N; ++i) {
    if (atoms_[i] != Element::PAD) out.push_back(i);
  }
  return out;
}

std::size_t MolecularGraph::atom_count() const {
  return static_cast<std::size_t>(std::count_if(atoms_.begin(), atoms_.end(), [](Element e) { return e != Element::PAD; }));
}

std::vector<std::size_t> MolecularGraph::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < N; ++j) {
    if (bonds_[i * N + j] != BondType::NONE) out.push_back(j);
  }
  return out;
}

std::vector<double> MolecularGraph::node_one_hot() const {
  std::vector<double> x(N * D, 0.0);
  for (std::size_t i = 0; i < N; ++i) x[i * D + static_cast<std::size_t>(atoms_[i])] = 1.0;
  return x;
}

std::vector<double> MolecularGraph::adjacency_one_hot() const {
  std::vector<double> a(N * N * B, 0.0);
  for (std::size_t ij = 0; ij < N * N; ++ij) a[ij * B + static_cast<std::size_t>(bonds_[ij])] = 1.0;
  return a;
}

MolecularGraph MolecularGraph::from_one_hot(std::span<const double> x, std::span<const double> a) {
  if (x.size() != N * D || a.size() != N * N * B) throw ShapeError("one-hot graph tensors have the wrong size");
  const auto one_hot_index = [](const double* v, std::size_t n) {
    std::size_t hot = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (v[k] == 1.0) {
        if (hot != n) return n;
        hot = k;
      } else if (v[k] != 0.0) {
        return n;
      }
    }
    return hot;
  };
  MolecularGraph g;
  for (std::size_t i = 0; i < N; ++i) {
    const auto k = one_hot_index(x.data() + i * D, D);
    if (k == D) throw InvalidArgument("node row " + std::to_string(i) + " is not one-hot");
    g.atoms_[i] = static_cast<Element>(k);
  }
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const auto k = one_hot_index(a.data() + (i * N + j) * B, B);
      if (k == B) throw InvalidArgument("bond fiber (" + std::to_string(i) + "," + std::to_string(j) + ") is not one-hot");
      g.bonds_[i * N + j] = static_cast<BondType>(k);
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (g.bonds_[i * N + i] != BondType::NONE) throw InvalidArgument("diagonal bond is not NONE");
    for (std::size_t j = 0; j < N; ++j) {
      if (g.bonds_[i * N + j] != g.bonds_[j * N + i]) throw InvalidArgument("adjacency is not symmetric");
      if (g.bonds_[i * N + j] != BondType::NONE && (g.atoms_[i] == Element::PAD || g.atoms_[j] == Element::PAD)) {
        throw InvalidArgument("PAD slot carries a bond");
      }
    }
  }
  return g;
}

MolecularGraph MolecularGraph::compacted() const {
  std::vector<std::size_t> perm = atom_indices();
  for (std::size_t i = 0; i < N; ++i) {
    if (atoms_[i] == Element::PAD) perm.push_back(i);
  }
  return permute(*this, perm);
}

MolecularGraph decode_logits(const DenseGraphLogits& logits) {
  check_logits(logits);
  const auto a = symmetrized(logits.a);
  MolecularGraph g;
  for (std::size_t i = 0; i < N; ++i) g.set_atom(i, static_cast<Element>(argmax_lowest(logits.x.data() + i * D, D)));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      if (g.atom(i) == Element::PAD || g.atom(j) == Element::PAD) continue;
      g.set_bond(i, j, static_cast<BondType>(argmax_lowest(a.data() + (i * N + j) * B, B)));
    }
  }
  return g;
}

RelaxedGraph relax(const DenseGraphLogits& logits) {
  check_logits(logits);
  RelaxedGraph r;
  r.x.resize(N * D);
  for (std::size_t i = 0; i < N; ++i) softmax_into(logits.x.data() + i * D, r.x.data() + i * D, D);
  const auto a = symmetrized(logits.a);
  r.a.resize(N * N * B);
  for (std::size_t ij = 0; ij < N * N; ++ij) softmax_into(a.data() + ij * B, r.a.data() + ij * B, B);
  for (std::size_t i = 0; i < N; ++i) {
    double* fiber = r.a.data() + (i * N + i) * B;
    std::fill(fiber, fiber + B, 0.0);
    fiber[0] = 1.0;
  }
  return r;
}

MolecularGraph permute(const MolecularGraph& g, std::span<const std::size_t> perm) {
  if (perm.size() != N) throw InvalidArgument("permutation must cover all atom slots");
  std::array<bool, N> seen{};
  for (const auto p : perm) {
    if (p >= N || seen[p]) throw InvalidArgument("not a permutation");
    seen[p] = true;
  }
  MolecularGraph out;
  for (std::size_t i = 0; i < N; ++i) out.set_atom(i, g.atom(perm[i]));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) out.set_bond(i, j, g.bond(perm[i], perm[j]));
  return out;
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

MolecularGraph random_permute(const MolecularGraph& g, std::uint64_t seed) {
  return permute(g, random_permutation(N, seed));
}

std::string describe(const MolecularGraph& g) {
  static constexpr const char* kBondNames[] = {"", "-", "=", "#", ":"};
  std::ostringstream out;
  out << "atoms:";
  for (std::size_t i = 0; i < N; ++i) out << ' ' << element_symbol(g.atom(i));
  out << " bonds:";
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const auto b = g.bond(i, j);
      if (b != BondType::NONE) out << ' ' << i << kBondNames[static_cast<int>(b)] << j;
    }
  return out.str();
}

}  // namespace qmg::mol
