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

#include "qmg/chem/properties.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qmg/chem/view.hpp"
#include "qmg/common/error.hpp"
#include "qmg/mol/rings.hpp"
#include "qmg/mol/valence.hpp"

namespace qmg::chem {

using mol::BondType;

namespace {

constexpr int kC = 6, kN = 7, kO = 8, kF = 9;

std::string environment_text(const ChemView& v, std::size_t i) {
  const auto& a = v.atoms[i];
  return "atom " + std::to_string(i) + " (Z=" + std::to_string(a.z) + (a.aromatic ? ", aromatic" : "") +
         ", H=" + std::to_string(a.total_h) + ", D=" + std::to_string(a.degree) + ")";
}

bool has_double_to(const ChemView& v, std::size_t i, int z) {
  for (const auto& b : v.bonds[i]) {
    if (b.type == BondType::DOUBLE && v.atoms[b.other].z == z && !v.atoms[b.other].aromatic) return true;
  }
  return false;
}

bool has_triple(const ChemView& v, std::size_t i) {
  return std::any_of(v.bonds[i].begin(), v.bonds[i].end(), [](const ChemBond& b) { return b.type == BondType::TRIPLE; });
}

bool is_acceptor(const ChemView& v, std::size_t i) {
  const auto& a = v.atoms[i];
  if (a.z == kO && a.aromatic) return a.total_h == 0 && a.connectivity == 2;
  if (a.z == kO) {
    if (a.valence != 2) return false;
    return (a.connectivity == 2 && a.total_h <= 1) || (a.connectivity == 1 && a.total_h == 0);
  }
  if (a.z == kN && a.aromatic) return a.total_h == 0 && a.connectivity == 2;
  if (a.z == kN) {
    if (a.total_h == 0 && a.connectivity == 1 && a.valence == 3) return true;
    if (a.connectivity != 3 || a.valence != 3) return false;
    // Amide-type N: single/aromatic bond to an aliphatic C bearing =O.
    for (const auto& b : v.bonds[i]) {
      if (b.type != BondType::SINGLE && b.type != BondType::AROMATIC) continue;
      const auto& c = v.atoms[b.other];
      if (c.z == kC && !c.aromatic && has_double_to(v, b.other, kO)) return false;
    }
    return true;
  }
  return false;
}

bool is_donor(const ChemView& v, std::size_t i) {
  const auto& a = v.atoms[i];
  if (a.z == kN && !a.aromatic) return a.total_h > 0 && a.valence == 3;
  if (a.z == kO && !a.aromatic) return a.total_h == 1;
  if (a.z == kN && a.aromatic) return a.total_h == 1;
  return false;
}

int count_neighbors(const ChemView& v, std::size_t i, auto pred) {
  int n = 0;
  for (const auto& b : v.bonds[i]) n += pred(v.atoms[b.other]) ? 1 : 0;
  return n;
}

bool rotor_end_ok(const ChemView& v, std::size_t i) {
  const auto& a = v.atoms[i];
  if (a.degree == 1 || has_triple(v, i)) return false;
  if (a.z == kC && !a.aromatic) {
    if (count_neighbors(v, i, [](const ChemAtom& n) { return n.z == kF; }) >= 3) return false;
    if (count_neighbors(v, i, [](const ChemAtom& n) { return n.z == kC && !n.aromatic && n.total_h == 3; }) >= 3) {
      return false;
    }
  }
  return true;
}

bool is_acyl_carbon(const ChemView& v, std::size_t i) {
  const auto& a = v.atoms[i];
  if (a.z != kC || a.aromatic || a.degree != 3) return false;
  return has_double_to(v, i, kN) || has_double_to(v, i, kO);
}

bool is_acyl_partner_element(const ChemView& v, std::size_t i) {
  const auto& a = v.atoms[i];
  return a.z == kN || (a.z == kO && !a.aromatic);
}

// Atom excluded as the first end of a rotor: an acyl carbon with a
// non-ring single bond to N/O, or an N/O with such a bond to an acyl carbon.
bool amide_like(const ChemView& v, std::size_t i) {
  for (const auto& b : v.bonds[i]) {
    if (b.type != BondType::SINGLE || b.in_ring) continue;
    if (is_acyl_carbon(v, i) && is_acyl_partner_element(v, b.other)) return true;
    if (is_acyl_partner_element(v, i) && is_acyl_carbon(v, b.other)) return true;
  }
  return false;
}

int rotatable_bonds(const ChemView& v) {
  int n = 0;
  for (std::size_t i = 0; i < v.heavy_count; ++i) {
    for (const auto& b : v.bonds[i]) {
      const auto j = b.other;
      if (j <= i || b.in_ring || b.type != BondType::SINGLE) continue;
      if (!rotor_end_ok(v, i) || !rotor_end_ok(v, j)) continue;
      if (amide_like(v, i) && amide_like(v, j)) continue;
      ++n;
    }
  }
  return n;
}

int aromatic_ring_count(const ChemView& v) {
  mol::MolecularGraph reduced = v.aromatic_form;
  for (std::size_t i = 0; i < v.heavy_count; ++i) {
    const auto& a = v.atoms[i];
    if (a.aromatic || a.ring_count == 0) continue;
    for (const auto& b : v.bonds[i]) {
      const bool default_bond = b.type == BondType::SINGLE || b.type == BondType::AROMATIC;
      if (default_bond && !v.atoms[b.other].aromatic) {
        reduced.set_atom(a.slot, mol::Element::PAD);
        break;
      }
    }
  }
  return static_cast<int>(mol::find_rings(reduced).sssr.size());
}

}  // namespace

std::vector<CrippenAtom> crippen_types(const mol::MolecularGraph& g, const ChemTables& t) {
  const auto v = perceive(g, /*explicit_hydrogens=*/true);
  std::vector<CrippenAtom> out;
  for (std::size_t i = 0; i < v.atoms.size(); ++i) {
    bool found = false;
    for (const auto& e : t.crippen) {
      if (e.pattern.matches_at(v, i)) {
        out.push_back({i, e.label, e.value});
        found = true;
        break;
      }
    }
    if (!found) throw InvalidArgument("crippen: no atom type for " + environment_text(v, i));
  }
  return out;
}

double crippen_logp(const mol::MolecularGraph& g, const ChemTables& t) {
  double sum = 0.0;
  for (const auto& a : crippen_types(g, t)) sum += a.contribution;
  return sum;
}

double tpsa(const mol::MolecularGraph& g, const ChemTables& t) {
  const auto v = perceive(g);
  double sum = 0.0;
  for (std::size_t i = 0; i < v.heavy_count; ++i) {
    if (v.atoms[i].z != kN && v.atoms[i].z != kO) continue;
    for (const auto& e : t.tpsa) {
      if (e.pattern.matches_at(v, i)) {
        sum += e.value;
        break;
      }
    }
  }
  return sum;
}

double molecular_weight(const mol::MolecularGraph& g) {
  const auto report = mol::valence_valid(g, /*require_connected=*/false);
  if (!report.valid) throw InvalidArgument("molecular_weight: graph is not valid");
  double mw = 0.0;
  for (const auto i : g.atom_indices()) {
    switch (g.atom(i)) {
      case mol::Element::C: mw += 12.011; break;
      case mol::Element::N: mw += 14.007; break;
      case mol::Element::O: mw += 15.999; break;
      case mol::Element::F: mw += 18.998; break;
      default: break;
    }
    mw += 1.008 * report.implicit_h[i];
  }
  return mw;
}

DescriptorSet compute_descriptors(const mol::MolecularGraph& g, const ChemTables& t) {
  const auto v = perceive(g);
  DescriptorSet d;
  d.mw = molecular_weight(g);
  d.logp = crippen_logp(g, t);
  d.tpsa = tpsa(g, t);
  for (std::size_t i = 0; i < v.heavy_count; ++i) {
    d.hba += is_acceptor(v, i) ? 1 : 0;
    d.hbd += is_donor(v, i) ? 1 : 0;
  }
  d.rotb = rotatable_bonds(v);
  d.arom = aromatic_ring_count(v);
  std::set<std::string> groups;
  for (const auto& e : t.alerts) {
    if (!groups.count(e.label) && e.pattern.matches(v)) groups.insert(e.label);
  }
  d.alerts = static_cast<int>(groups.size());
  return d;
}

double desirability(double x, double a, double b, double c, double d, double e, double f, double dmax) {
  const double rise = 1.0 / (1.0 + std::exp(-(x - c + d / 2.0) / e));
  const double fall = 1.0 - 1.0 / (1.0 + std::exp(-(x - c - d / 2.0) / f));
  return (a + b * rise * fall) / dmax;
}

double qed_score(const DescriptorSet& d, const ChemTables& t) {
  const std::pair<const char*, double> values[] = {
      {"MW", d.mw},     {"ALOGP", d.logp}, {"HBA", static_cast<double>(d.hba)},   {"HBD", static_cast<double>(d.hbd)},
      {"PSA", d.tpsa},  {"ROTB", static_cast<double>(d.rotb)}, {"AROM", static_cast<double>(d.arom)},
      {"ALERTS", static_cast<double>(d.alerts)},
  };
  double num = 0.0, den = 0.0;
  for (const auto& [name, x] : values) {
    const std::string k(name);
    const double des = desirability(x, t.qed_param(k + ".A"), t.qed_param(k + ".B"), t.qed_param(k + ".C"),
                                    t.qed_param(k + ".D"), t.qed_param(k + ".E"), t.qed_param(k + ".F"),
                                    t.qed_param(k + ".DMAX"));
    const double w = t.qed_param(k + ".WEIGHT");
    num += w * std::log(des);
    den += w;
  }
  return std::exp(num / den);
}

}  // namespace qmg::chem
