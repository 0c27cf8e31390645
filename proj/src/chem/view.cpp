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

#include "qmg/chem/view.hpp"

#include "qmg/common/error.hpp"
#include "qmg/mol/valence.hpp"

namespace qmg::chem {

using mol::BondType;
using mol::Element;

namespace {

int atomic_number(Element e) {
  switch (e) {
    case Element::C: return 6;
    case Element::N: return 7;
    case Element::O: return 8;
    case Element::F: return 9;
    default: return 0;
  }
}

}  // namespace

const ChemBond* ChemView::bond(std::size_t a, std::size_t b) const {
  for (const auto& e : bonds[a]) {
    if (e.other == b) return &e;
  }
  return nullptr;
}

ChemView perceive(const mol::MolecularGraph& g, bool explicit_hydrogens) {
  const auto report = mol::valence_valid(g, /*require_connected=*/false);
  if (!report.valid) throw InvalidArgument("perceive: graph is not valid");
  ChemView v;
  v.kekule = *mol::kekulize(g);
  v.rings = mol::find_rings(v.kekule);
  v.aromaticity = mol::perceive_aromaticity(v.kekule, v.rings);
  v.aromatic_form = mol::aromatic_form(v.kekule, v.aromaticity);
  const auto hydrogens = mol::implicit_hydrogens(v.kekule);

  std::array<std::size_t, mol::kMaxAtoms> index{};
  for (const auto s : g.atom_indices()) {
    index[s] = v.atoms.size();
    ChemAtom a;
    a.z = atomic_number(g.atom(s));
    a.aromatic = v.aromaticity.atom[s];
    a.total_h = hydrogens[s];
    a.ring_count = v.rings.ring_count(s);
    a.smallest_ring = v.rings.smallest_ring(s);
    a.slot = s;
    v.atoms.push_back(a);
  }
  v.heavy_count = v.atoms.size();
  v.bonds.resize(v.atoms.size());
  for (const auto s : g.atom_indices()) {
    auto& a = v.atoms[index[s]];
    a.valence = a.total_h;
    for (const auto t : g.neighbors(s)) {
      ChemBond b;
      b.other = index[t];
      b.type = v.aromatic_form.bond(s, t);
      b.kekule_order = mol::bond_order(v.kekule.bond(s, t));
      b.in_ring = v.rings.bond_in_ring(s, t);
      a.valence += b.kekule_order;
      v.bonds[index[s]].push_back(b);
    }
    a.degree = static_cast<int>(v.bonds[index[s]].size());
    a.connectivity = a.degree + a.total_h;
  }
  if (explicit_hydrogens) {
    for (std::size_t i = 0; i < v.heavy_count; ++i) {
      for (int k = 0; k < v.atoms[i].total_h; ++k) {
        const std::size_t h = v.atoms.size();
        ChemAtom ha;
        ha.z = 1;
        ha.degree = ha.connectivity = ha.valence = 1;
        v.atoms.push_back(ha);
        v.bonds.push_back({ChemBond{i, BondType::SINGLE, 1, false}});
        v.bonds[i].push_back(ChemBond{h, BondType::SINGLE, 1, false});
        ++v.atoms[i].degree;
      }
    }
  }
  return v;
}

}  // namespace qmg::chem
