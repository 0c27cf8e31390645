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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "fixture.hpp"
#include "qmg/chem/pattern.hpp"
#include "qmg/chem/properties.hpp"
#include "qmg/chem/rewards.hpp"
#include "qmg/chem/sa.hpp"
#include "qmg/chem/tables.hpp"
#include "qmg/common/error.hpp"
#include "qmg/common/rng.hpp"
#include "qmg/common/stats.hpp"
#include "qmg/mol/valence.hpp"
#include "qmg/smiles/smiles.hpp"

namespace qmg::chem {
namespace {

using mol::BondType;
using mol::Element;
using mol::MolecularGraph;

MolecularGraph mol_of(const std::string& s) { return smiles::parse(s); }

// Random connected graph that respects valences: a random tree is grown and
// extra bonds are added while both ends have spare valence.
MolecularGraph random_valid_graph(Rng& rng) {
  MolecularGraph g;
  const auto n = static_cast<std::size_t>(1 + rng.below(mol::kMaxAtoms));
  const Element elems[] = {Element::C, Element::C, Element::C, Element::N, Element::O, Element::F};
  std::array<int, mol::kMaxAtoms> spare{};
  for (std::size_t i = 0; i < n; ++i) {
    Element e = elems[rng.below(6)];
    if (i > 0 && n > 2 && e == Element::F) e = Element::C;
    g.set_atom(i, e);
    spare[i] = mol::max_valence(e);
  }
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::size_t> options;
    for (std::size_t j = 0; j < i; ++j) {
      if (spare[j] > 0) options.push_back(j);
    }
    if (options.empty() || spare[i] == 0) return random_valid_graph(rng);
    const auto j = options[rng.below(options.size())];
    g.set_bond(i, j, BondType::SINGLE);
    --spare[i];
    --spare[j];
  }
  for (int k = 0; k < 4; ++k) {
    const auto i = rng.below(n), j = rng.below(n);
    if (i == j || spare[i] == 0 || spare[j] == 0) continue;
    const auto cur = g.bond(i, j);
    if (cur == BondType::NONE) {
      g.set_bond(i, j, BondType::SINGLE);
    } else if (cur == BondType::SINGLE) {
      g.set_bond(i, j, BondType::DOUBLE);
    } else if (cur == BondType::DOUBLE) {
      g.set_bond(i, j, BondType::TRIPLE);
    } else {
      continue;
    }
    --spare[i];
    --spare[j];
  }
  return g;
}

TEST(Pattern, CompileErrors) {
  EXPECT_THROW(Pattern::compile(""), ParseError);
  EXPECT_THROW(Pattern::compile("[C"), ParseError);
  EXPECT_THROW(Pattern::compile("C(C"), ParseError);
  EXPECT_THROW(Pattern::compile("C1CC"), ParseError);
  EXPECT_THROW(Pattern::compile("[$(CO)]"), ParseError);
  EXPECT_THROW(Pattern::compile("C="), ParseError);
}

TEST(Pattern, AtomPrimitivesAndPrecedence) {
  const auto v = perceive(mol_of("CC(=O)NC1CC1"));
  // slot order: C0 C1 O2 N3 C4 C5 C6
  EXPECT_TRUE(Pattern::compile("[CH3]").matches_at(v, 0));
  EXPECT_FALSE(Pattern::compile("[CH3]").matches_at(v, 1));
  EXPECT_TRUE(Pattern::compile("[CD3](=O)N").matches_at(v, 1));
  EXPECT_TRUE(Pattern::compile("[N!R]").matches_at(v, 3));
  EXPECT_TRUE(Pattern::compile("[CR1;r3]").matches_at(v, 4));
  EXPECT_FALSE(Pattern::compile("[CR0]").matches_at(v, 4));
  EXPECT_TRUE(Pattern::compile("[#7,O,S!D1]").matches_at(v, 2));
  EXPECT_TRUE(Pattern::compile("[NH1X3v3+0]").matches_at(v, 3));
  EXPECT_FALSE(Pattern::compile("[N+]").matches_at(v, 3));
  EXPECT_TRUE(Pattern::compile("C-!@N").matches_at(v, 4));
  EXPECT_FALSE(Pattern::compile("C@N").matches_at(v, 4));
  EXPECT_TRUE(Pattern::compile("C1CC1").matches_at(v, 5));
  EXPECT_FALSE(Pattern::compile("C1CCC1").matches(v));
}

TEST(Pattern, AromaticAndCounting) {
  const auto v = perceive(mol_of("C1=CC=NC=C1"));
  EXPECT_EQ(Pattern::compile("c").count_unique(v), 5u);
  EXPECT_EQ(Pattern::compile("a").count_unique(v), 6u);
  EXPECT_EQ(Pattern::compile("c:n").count_unique(v), 2u);
  EXPECT_EQ(Pattern::compile("C").count_unique(v), 0u);
  EXPECT_EQ(Pattern::compile("c1ccncc1").count_unique(v), 1u);
  EXPECT_EQ(Pattern::compile("c=c").count_unique(v), 0u);
}

TEST(Pattern, ExplicitHydrogens) {
  const auto v = perceive(mol_of("CO"), /*explicit_hydrogens=*/true);
  ASSERT_EQ(v.atoms.size(), 6u);
  EXPECT_TRUE(Pattern::compile("[#1]O[CX4,c]").matches_at(v, 5));
  EXPECT_TRUE(Pattern::compile("[#1][#6,#1]").matches_at(v, 2));
  EXPECT_TRUE(Pattern::compile("[CH3]").matches_at(v, 0));
  EXPECT_TRUE(Pattern::compile("[CD4]").matches_at(v, 0));
}

TEST(Tables, LoadAndChecksum) {
  const auto& t = default_chem_tables();
  EXPECT_GT(t.crippen.size(), 80u);
  EXPECT_EQ(t.tpsa.size(), 20u);
  EXPECT_EQ(t.qed.size(), 64u);
  EXPECT_GE(t.alerts.size(), 20u);
  const auto dir = std::filesystem::temp_directory_path() / "qmg_chem_tables";
  std::filesystem::create_directories(dir);
  for (const auto* f : {"crippen.tsv", "tpsa.tsv", "qed_params.tsv", "alerts.tsv"}) {
    std::filesystem::copy_file(data_dir() / f, dir / f, std::filesystem::copy_options::overwrite_existing);
  }
  EXPECT_NO_THROW(load_chem_tables(dir));
  std::ofstream(dir / "tpsa.tsv", std::ios::app) << "[N]\t1.0\textra\n";
  EXPECT_THROW(load_chem_tables(dir), IoError);
  std::filesystem::remove(dir / "tpsa.tsv");
  EXPECT_THROW(load_chem_tables(dir), IoError);
  std::filesystem::remove_all(dir);
}

TEST(Crippen, EthanolMatchesReference) {
  const auto rows = testing::load_oracle("examples_oracle.csv");
  ASSERT_EQ(rows[0].smiles, "CCO");
  EXPECT_NEAR(crippen_logp(mol_of("CCO")), rows[0].logp, 1e-3);
}

TEST(Crippen, FixtureAgreement) {
  const auto rows = testing::load_oracle();
  ASSERT_GE(rows.size(), 200u);
  double mae = 0;
  for (const auto& r : rows) {
    const double lp = crippen_logp(mol_of(r.smiles));
    EXPECT_NEAR(lp, r.logp, 1e-3) << r.smiles;
    mae += std::abs(lp - r.logp);
  }
  EXPECT_LE(mae / static_cast<double>(rows.size()), 0.05);
}

TEST(Crippen, EveryAtomTyped) {
  for (const auto& line : smiles::read_smiles_file(data_dir() / "qm9_subset.smi")) {
    const auto g = mol_of(line.text);
    const auto types = crippen_types(g);
    std::size_t expect = g.atom_count();
    for (const auto h : mol::implicit_hydrogens(*mol::kekulize(g))) expect += static_cast<std::size_t>(h);
    ASSERT_EQ(types.size(), expect) << line.text;
  }
}

TEST(Crippen, PadIsInert) {
  MolecularGraph g;
  g.set_atom(0, Element::C);
  g.set_atom(4, Element::O);
  g.set_atom(7, Element::C);
  g.set_bond(0, 4, BondType::SINGLE);
  g.set_bond(4, 7, BondType::SINGLE);
  EXPECT_EQ(crippen_logp(g), crippen_logp(mol_of("COC")));
}

TEST(Descriptors, Methane) {
  const auto d = compute_descriptors(mol_of("C"));
  EXPECT_NEAR(d.mw, 16.043, 1e-3);
  EXPECT_EQ(d.hba, 0);
  EXPECT_EQ(d.hbd, 0);
  EXPECT_EQ(d.tpsa, 0.0);
  EXPECT_EQ(d.rotb, 0);
}

TEST(Descriptors, ExampleMoleculesMatchReference) {
  for (const auto& r : testing::load_oracle("examples_oracle.csv")) {
    const auto d = compute_descriptors(mol_of(r.smiles));
    EXPECT_NEAR(d.mw, r.mw, 1e-3) << r.smiles;
    EXPECT_EQ(d.hba, r.hba) << r.smiles;
    EXPECT_EQ(d.hbd, r.hbd) << r.smiles;
    EXPECT_NEAR(d.tpsa, r.tpsa, 1e-3) << r.smiles;
    EXPECT_EQ(d.rotb, r.rotb) << r.smiles;
    EXPECT_EQ(d.arom, r.arom) << r.smiles;
    EXPECT_NEAR(qed_score(d), r.qed, 1e-4) << r.smiles;
  }
  const auto benzene = compute_descriptors(mol_of("c1ccccc1"));
  EXPECT_EQ(benzene.arom, 1);
}

TEST(Descriptors, FixtureAgreement) {
  for (const auto& r : testing::load_oracle()) {
    const auto d = compute_descriptors(mol_of(r.smiles));
    EXPECT_NEAR(d.mw, r.mw, 1e-3) << r.smiles;
    EXPECT_EQ(d.hba, r.hba) << r.smiles;
    EXPECT_EQ(d.hbd, r.hbd) << r.smiles;
    EXPECT_NEAR(d.tpsa, r.tpsa, 1e-3) << r.smiles;
    EXPECT_EQ(d.rotb, r.rotb) << r.smiles;
    EXPECT_EQ(d.arom, r.arom) << r.smiles;
    EXPECT_GE(d.alerts, 0);
  }
}

TEST(Qed, FixtureRankCorrelation) {
  std::vector<double> ours, ref;
  for (const auto& r : testing::load_oracle()) {
    const double q = qed_score(compute_descriptors(mol_of(r.smiles)));
    EXPECT_GT(q, 0.0);
    EXPECT_LE(q, 1.0);
    ours.push_back(q);
    ref.push_back(r.qed);
  }
  EXPECT_GE(spearman(ours, ref), 0.90);
}

TEST(Qed, AlertNeverIncreasesScore) {
  for (const auto& r : testing::load_oracle()) {
    auto d = compute_descriptors(mol_of(r.smiles));
    for (int k = 0; k < 3; ++k) {
      const double before = qed_score(d);
      ++d.alerts;
      EXPECT_LE(qed_score(d), before);
    }
  }
}

TEST(Qed, Desirability) {
  // With D=0 and equal slopes the two sigmoids meet at C: a + b * 0.5 * 0.5.
  EXPECT_NEAR(desirability(3.0, 0.1, 2.0, 3.0, 0.0, 1.0, 1.0, 1.0), 0.1 + 2.0 * 0.25, 1e-15);
}

TEST(Sa, FixtureRankCorrelation) {
  std::vector<double> ours, ref;
  for (const auto& r : testing::load_oracle()) {
    ours.push_back(sa_score(mol_of(r.smiles)));
    ref.push_back(r.sa);
  }
  EXPECT_GE(spearman(ours, ref), 0.80);
}

// Methane has one fragment; every corpus fragment scores >= log10(1/c80)
// and no penalty applies, so the score follows from the affine map alone.
TEST(Sa, MethaneFromFormula) {
  const auto& t = default_fragment_table();
  const double frag = t.lookup(atom_environments(mol_of("C")).begin()->first);
  const double expected = 11.0 - (frag + 4.0 + 1.0) / 6.5 * 9.0;
  EXPECT_NEAR(sa_score(mol_of("C")), std::clamp(expected, 1.0, 10.0), 1e-12);
}

TEST(Sa, BoundedOnRandomGraphs) {
  Rng rng(11);
  for (int k = 0; k < 10000; ++k) {
    const auto g = random_valid_graph(rng);
    ASSERT_TRUE(mol::valence_valid(g).valid) << mol::describe(g);
    const double s = sa_score(g);
    ASSERT_GE(s, 1.0);
    ASSERT_LE(s, 10.0);
  }
}

TEST(Sa, EmptyTableRejected) {
  EXPECT_THROW(sa_score(mol_of("C"), FragmentTable{}), InvalidArgument);
  EXPECT_THROW(build_fragment_table({}), InvalidArgument);
}

TEST(Sa, ComplexityCounts) {
  const auto spiro = complexity_counts(perceive(mol_of("C1CC11CC1")));
  EXPECT_EQ(spiro.spiro, 1);
  const auto norbornane = complexity_counts(perceive(mol_of("C1CC2CCC1C2")));
  EXPECT_EQ(norbornane.bridgeheads, 2);
  const auto decalin_like = complexity_counts(perceive(mol_of("C1CCC2CCCC2C1")));
  EXPECT_EQ(decalin_like.bridgeheads, 0);
  EXPECT_EQ(complexity_counts(perceive(mol_of("CC(O)CC"))).stereocentres, 1);
  EXPECT_EQ(complexity_counts(perceive(mol_of("CC(C)CC"))).stereocentres, 0);
}

TEST(Fingerprint, Tanimoto) {
  const auto a = atom_environments(mol_of("CCO"));
  const auto b = atom_environments(mol_of("OCC"));
  const auto c = atom_environments(mol_of("CCN"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(tanimoto(a, b), 1.0);
  EXPECT_LT(tanimoto(a, c), 1.0);
  EXPECT_GE(tanimoto(a, c), 0.0);
  EXPECT_EQ(tanimoto(a, c), tanimoto(c, a));
}

TEST(Normalize, Endpoints) {
  PropertyScores p;
  p.logp_raw = 6.04;
  p.sa_raw = 10.0;
  p.qed_raw = 0.37;
  const auto n = normalize_rewards(p);
  EXPECT_EQ(n.logp_norm, 1.0);
  EXPECT_EQ(n.sa_norm, 0.0);
  EXPECT_EQ(n.qed_norm, 0.37);
  p.logp_raw = -2.12;
  p.sa_raw = 1.0;
  EXPECT_EQ(normalize_rewards(p).logp_norm, 0.0);
  EXPECT_EQ(normalize_rewards(p).sa_norm, 1.0);
  p.logp_raw = 50.0;
  p.sa_raw = -3.0;
  EXPECT_EQ(normalize_rewards(p).logp_norm, 1.0);
  EXPECT_EQ(normalize_rewards(p).sa_norm, 1.0);
}

TEST(Normalize, MonotoneAndBounded) {
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    PropertyScores a, b;
    a.logp_raw = rng.uniform(-5, 9);
    b.logp_raw = a.logp_raw + rng.uniform(0, 2);
    a.sa_raw = rng.uniform(1, 10);
    b.sa_raw = a.sa_raw + rng.uniform(0, 2);
    const auto na = normalize_rewards(a), nb = normalize_rewards(b);
    EXPECT_LE(na.logp_norm, nb.logp_norm);
    EXPECT_GE(na.sa_norm, nb.sa_norm);
    for (const double v : {na.logp_norm, na.sa_norm, nb.logp_norm, nb.sa_norm}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Properties, PermutationInvariantAndDeterministic) {
  const auto rows = testing::load_oracle();
  for (std::size_t k = 0; k < rows.size(); k += 5) {
    const auto g = mol_of(rows[k].smiles);
    const auto base = score_molecule(g);
    const auto again = score_molecule(g);
    EXPECT_EQ(base.qed_raw, again.qed_raw);
    EXPECT_EQ(base.sa_raw, again.sa_raw);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto p = score_molecule(mol::random_permute(g, seed));
      EXPECT_NEAR(p.qed_raw, base.qed_raw, 1e-12) << rows[k].smiles;
      EXPECT_NEAR(p.logp_raw, base.logp_raw, 1e-12) << rows[k].smiles;
      EXPECT_NEAR(p.sa_raw, base.sa_raw, 1e-12) << rows[k].smiles;
    }
  }
}

}  // namespace
}  // namespace qmg::chem
