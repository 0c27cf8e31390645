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

#include <map>
#include <set>

#include "fixture.hpp"
#include "qmg/common/error.hpp"
#include "qmg/common/rng.hpp"
#include "qmg/mol/canon.hpp"
#include "qmg/mol/valence.hpp"
#include "qmg/smiles/smiles.hpp"

namespace qmg::smiles {
namespace {

using mol::BondType;
using mol::Element;
using mol::MolecularGraph;

std::filesystem::path dataset() { return std::filesystem::path(QMG_DATA_DIR) / "qm9_subset.smi"; }

TEST(Tokenize, ConcatenatesBack) {
  for (const std::string s : {"CCO", "C1=CC=CC=C1", "CC(=O)N(C)C#N", "c1ccoc1", "C.C", "C:1"}) {
    std::string joined;
    std::size_t pos = 0;
    for (const auto& t : tokenize(s)) {
      EXPECT_EQ(t.position, pos);
      pos += t.text.size();
      joined += t.text;
    }
    EXPECT_EQ(joined, s);
  }
}

TEST(Tokenize, Kinds) {
  const auto t = tokenize("C(=O)1");
  ASSERT_EQ(t.size(), 6u);
  EXPECT_EQ(t[0].kind, TokenKind::atom);
  EXPECT_EQ(t[1].kind, TokenKind::branch_open);
  EXPECT_EQ(t[2].kind, TokenKind::bond);
  EXPECT_EQ(t[3].kind, TokenKind::atom);
  EXPECT_EQ(t[4].kind, TokenKind::branch_close);
  EXPECT_EQ(t[5].kind, TokenKind::ring_digit);
}

TEST(Parse, Ethanol) {
  const auto g = parse("CCO");
  EXPECT_EQ(g.atom_count(), 3u);
  EXPECT_EQ(g.atom(0), Element::C);
  EXPECT_EQ(g.atom(1), Element::C);
  EXPECT_EQ(g.atom(2), Element::O);
  EXPECT_EQ(g.bond(0, 1), BondType::SINGLE);
  EXPECT_EQ(g.bond(1, 2), BondType::SINGLE);
  EXPECT_EQ(g.bond(0, 2), BondType::NONE);
}

TEST(Parse, Triple) { EXPECT_EQ(parse("C#N").bond(0, 1), BondType::TRIPLE); }

TEST(Parse, RingClosure) {
  const auto g = parse("C1CC1");
  EXPECT_EQ(g.bond(0, 1), BondType::SINGLE);
  EXPECT_EQ(g.bond(1, 2), BondType::SINGLE);
  EXPECT_EQ(g.bond(0, 2), BondType::SINGLE);
}

TEST(Parse, AromaticBonds) {
  const auto g = parse("c1ccncc1");
  EXPECT_EQ(g.bond(0, 1), BondType::AROMATIC);
  EXPECT_EQ(g.bond(0, 5), BondType::AROMATIC);
  EXPECT_EQ(g.atom(3), Element::N);
  const auto toluene = parse("Cc1ccccc1");
  EXPECT_EQ(toluene.bond(0, 1), BondType::SINGLE);
  EXPECT_EQ(parse("c1cc:ccc1").bond(2, 3), BondType::AROMATIC);
}

TEST(Parse, BranchesAndDot) {
  const auto g = parse("CC(C)(C)O");
  EXPECT_EQ(g.degree(1), 4u);
  const auto d = parse("C.O");
  EXPECT_EQ(d.atom_count(), 2u);
  EXPECT_EQ(d.bond(0, 1), BondType::NONE);
}

void expect_parse_error(const std::string& s, std::size_t offset) {
  try {
    parse(s);
    FAIL() << s << " parsed";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), offset) << s << ": " << e.what();
  }
}

TEST(Parse, ErrorsCarryOffsets) {
  expect_parse_error("", 0);
  expect_parse_error("C1CC", 1);           // unclosed ring
  expect_parse_error("CC(C", 2);           // unmatched (
  expect_parse_error("CC)C", 2);           // unmatched )
  expect_parse_error("CCS", 2);            // unsupported element
  expect_parse_error("CCCl", 2);           // chlorine
  expect_parse_error("C[NH3+]", 1);        // bracket atom
  expect_parse_error("CCCCCCCCCC", 9);     // tenth heavy atom
  expect_parse_error("CN(C)(C)C", 1);      // valence of N
  expect_parse_error("C=C(=C)=C", 2);      // middle carbon exceeds 4
  expect_parse_error("=C", 0);
  expect_parse_error("C=", 1);
  expect_parse_error("c", 0);              // aromatic atom without ring
  expect_parse_error("C11", 2);            // closure onto itself
}

TEST(Write, SingleCarbon) {
  MolecularGraph g;
  g.set_atom(0, Element::C);
  EXPECT_EQ(write(g), "C");
}

TEST(Write, RoundTripEthanol) {
  const auto g = parse("CCO");
  EXPECT_EQ(canonical_smiles(parse(write(g))), canonical_smiles(g));
}

TEST(Write, CyclopropaneOneClosurePair) {
  const auto s = write(parse("C1CC1"));
  EXPECT_EQ(s, "C1CC1");
  EXPECT_EQ(std::count(s.begin(), s.end(), '1'), 2);
}

TEST(Write, FollowsOrder) {
  const auto g = parse("CCO");
  const std::vector<std::size_t> order = {2, 1, 0};
  EXPECT_EQ(write(g, order), "OCC");
  EXPECT_EQ(write(parse("CC(=O)N"), std::vector<std::size_t>{1, 2, 3, 0}), "C(=O)(N)C");
}

TEST(Write, AromaticKeepsLowercaseAndExplicitSingles) {
  EXPECT_EQ(write(parse("c1ccccc1")), "c1ccccc1");
  MolecularGraph g = parse("c1ccoc1");
  EXPECT_EQ(canonical_smiles(parse(write(g))), canonical_smiles(g));
}

TEST(Write, RejectsInvalid) {
  MolecularGraph g;
  g.set_atom(0, Element::F);
  g.set_atom(1, Element::F);
  g.set_atom(2, Element::F);
  g.set_bond(0, 1, BondType::SINGLE);
  g.set_bond(1, 2, BondType::SINGLE);
  EXPECT_THROW(write(g), InvalidArgument);
  EXPECT_THROW(canonical_smiles(g), InvalidArgument);
  EXPECT_THROW(write(MolecularGraph()), InvalidArgument);
}

TEST(Canonical, SameAndDifferentMolecules) {
  EXPECT_EQ(canonical_smiles(parse("CCO")), canonical_smiles(parse("OCC")));
  EXPECT_NE(canonical_smiles(parse("CCO")), canonical_smiles(parse("CCC")));
  EXPECT_EQ(canonical_smiles(parse("C1=CC=CC=C1")), canonical_smiles(parse("c1ccccc1")));
  EXPECT_EQ(canonical_smiles(parse("C1=CC=CC=C1")), canonical_smiles(parse("C=1C=CC=CC=1")));
  EXPECT_EQ(canonical_smiles(parse("CC1=CC=CC=C1")), canonical_smiles(parse("C1=CC=C(C)C=C1")));
  EXPECT_EQ(canonical_smiles(parse("CC1=CC=CC=C1")), canonical_smiles(parse("CC1C=CC=CC=1")));
  // Tautomers are different molecules.
  EXPECT_NE(canonical_smiles(parse("CC1=CNC=N1")), canonical_smiles(parse("CC1=CN=CN1")));
}

TEST(Dataset, ReadsEveryLine) {
  const auto lines = read_smiles_file(dataset());
  EXPECT_EQ(lines.size(), 982u);
  EXPECT_THROW(read_smiles_file("/nonexistent/file.smi"), IoError);
}

TEST(Dataset, RoundTripAndPermutationInvariance) {
  for (const auto& line : read_smiles_file(dataset())) {
    const auto g = parse(line.text);
    ASSERT_TRUE(mol::valence_valid(g).valid) << line.text;
    const auto key = canonical_smiles(g);
    EXPECT_EQ(canonical_smiles(parse(write(g))), key) << line.text;
    EXPECT_EQ(canonical_smiles(parse(key)), key) << line.text;
  }
}

TEST(Fixture, PermutationInvariance) {
  for (const auto& row : testing::load_oracle()) {
    const auto g = parse(row.smiles);
    const auto key = canonical_smiles(g);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      ASSERT_EQ(canonical_smiles(mol::random_permute(g, seed)), key) << row.smiles << " seed " << seed;
    }
  }
}

// Two fixture molecules share our key exactly when they share the reference
// toolkit's canonical string.
TEST(Fixture, EquivalenceClassesMatchOracle) {
  const auto rows = testing::load_oracle();
  ASSERT_EQ(rows.size(), 246u);
  std::map<std::string, std::set<std::string>> ours_to_oracle, oracle_to_ours;
  for (const auto& row : rows) {
    const auto key = canonical_smiles(parse(row.smiles));
    ours_to_oracle[key].insert(row.canonical);
    oracle_to_ours[row.canonical].insert(key);
  }
  for (const auto& [k, v] : ours_to_oracle) EXPECT_EQ(v.size(), 1u) << k;
  for (const auto& [k, v] : oracle_to_ours) EXPECT_EQ(v.size(), 1u) << k;
}

// The reference canonical strings use the same subset except for [nH];
// every one we can read maps to the same key as its input.
TEST(Fixture, OracleStringsParseToSameMolecule) {
  std::size_t checked = 0;
  for (const auto& row : testing::load_oracle()) {
    if (row.canonical.find('[') != std::string::npos) continue;
    EXPECT_EQ(canonical_smiles(parse(row.canonical)), canonical_smiles(parse(row.smiles))) << row.smiles;
    ++checked;
  }
  EXPECT_GT(checked, 200u);
}

TEST(Fuzz, ParserOnlyRaisesParseErrors) {
  Rng rng(7);
  const std::string alphabet = "CNOFcno()=#-:.123456789[]%ClSBr@/\\ +H0";
  std::size_t parsed = 0;
  for (int k = 0; k < 100000; ++k) {
    const auto len = static_cast<std::size_t>(rng.below(65));
    std::string s(len, ' ');
    for (auto& ch : s) {
      ch = rng.bernoulli(0.9) ? alphabet[rng.below(alphabet.size())] : static_cast<char>(rng.below(256));
    }
    try {
      const auto g = parse(s);
      ++parsed;
      // Whatever parses must be writable and re-parse to the same molecule.
      EXPECT_EQ(canonical_smiles(parse(write(g))), canonical_smiles(g)) << s;
    } catch (const ParseError&) {
    }
  }
  EXPECT_GT(parsed, 0u);
}

}  // namespace
}  // namespace qmg::smiles
