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

#include <vector>

#include "qmg/chem/tables.hpp"
#include "qmg/mol/graph.hpp"

namespace qmg::chem {

struct DescriptorSet {
  double mw = 0.0;
  double logp = 0.0;
  int hba = 0;
  int hbd = 0;
  double tpsa = 0.0;
  int rotb = 0;
  int arom = 0;
  int alerts = 0;
};

struct CrippenAtom {
  std::size_t view_index = 0;
  std::string label;
  double contribution = 0.0;
};

/// Per-atom Wildman-Crippen typing, heavy atoms then hydrogens. Throws
/// InvalidArgument naming the environment if an atom matches no type.
std::vector<CrippenAtom> crippen_types(const mol::MolecularGraph& g, const ChemTables& t = default_chem_tables());
double crippen_logp(const mol::MolecularGraph& g, const ChemTables& t = default_chem_tables());

/// Topological polar surface area from N and O fragment contributions.
double tpsa(const mol::MolecularGraph& g, const ChemTables& t = default_chem_tables());

/// Average molecular weight including implicit hydrogens.
double molecular_weight(const mol::MolecularGraph& g);

/// Descriptors in the drug-likeness convention: acceptors are aromatic
/// n/o without H, ethers, hydroxyl and carbonyl O, nitrile N and non-amide
/// trivalent N; donors are N-H, O-H and n-H atoms; rotatable bonds exclude
/// terminal, triple, CX3 / t-butyl and amide/ester C-X bonds; aromatic rings
/// are counted after removing aliphatic ring atoms with aliphatic
/// substituents.
DescriptorSet compute_descriptors(const mol::MolecularGraph& g, const ChemTables& t = default_chem_tables());

/// Asymmetric double sigmoid desirability.
double desirability(double x, double a, double b, double c, double d, double e, double f, double dmax);

/// Weighted geometric mean of the eight desirabilities, in (0, 1].
double qed_score(const DescriptorSet& d, const ChemTables& t = default_chem_tables());

}  // namespace qmg::chem
