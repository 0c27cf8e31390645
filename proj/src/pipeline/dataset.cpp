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

#include "qmg/pipeline/dataset.hpp"

#include <algorithm>

#include "qmg/chem/tables.hpp"
#include "qmg/common/error.hpp"
#include "qmg/mol/valence.hpp"
#include "qmg/smiles/smiles.hpp"

namespace qmg::pipeline {

namespace {

enum class Reason { size, element, malformed, valence };

const char* reason_name(Reason r) {
  switch (r) {
    case Reason::size: return "size";
    case Reason::element: return "element";
    case Reason::malformed: return "malformed";
    case Reason::valence: return "valence";
  }
  return "malformed";
}

// Classifies a rejected string by tokenizing first, so an oversized molecule
// is reported as such rather than as a parse failure at its tenth atom.
Reason classify(const std::string& text) {
  std::vector<smiles::SmilesToken> tokens;
  try {
    tokens = smiles::tokenize(text);
  } catch (const ParseError&) {
    return Reason::element;
  }
  const auto atoms = std::count_if(tokens.begin(), tokens.end(),
                                   [](const smiles::SmilesToken& t) { return t.kind == smiles::TokenKind::atom; });
  if (static_cast<std::size_t>(atoms) > mol::kMaxAtoms) return Reason::size;
  return Reason::malformed;
}

}  // namespace

Dataset Dataset::slice(std::size_t begin, std::size_t count) const {
  Dataset out;
  out.source = source;
  out.stats = stats;
  const auto b = std::min(begin, graphs.size());
  const auto e = std::min(graphs.size(), b + count);
  out.graphs.assign(graphs.begin() + static_cast<std::ptrdiff_t>(b), graphs.begin() + static_cast<std::ptrdiff_t>(e));
  out.keys.assign(keys.begin() + static_cast<std::ptrdiff_t>(b), keys.begin() + static_cast<std::ptrdiff_t>(e));
  out.stats.kept = out.graphs.size();
  return out;
}

Dataset ingest(const std::filesystem::path& path) {
  Dataset d;
  d.source = path;
  std::set<std::string> seen;
  for (const auto& line : smiles::read_smiles_file(path)) {
    ++d.stats.lines;
    const auto drop = [&](const std::string& reason) {
      d.log.push_back(std::to_string(line.line) + ": " + reason + ": " + line.text);
    };
    mol::MolecularGraph g;
    try {
      g = smiles::parse(line.text);
    } catch (const ParseError& e) {
      auto r = classify(line.text);
      if (r == Reason::malformed && std::string(e.what()).find("valence") != std::string::npos) r = Reason::valence;
      switch (r) {
        case Reason::size: ++d.stats.size; break;
        case Reason::element: ++d.stats.element; break;
        case Reason::valence: ++d.stats.valence; break;
        case Reason::malformed: ++d.stats.malformed; break;
      }
      drop(std::string(reason_name(r)) + " (" + e.what() + ")");
      continue;
    }
    const auto report = mol::valence_valid(g);
    if (!report.valid) {
      ++d.stats.valence;
      drop("valence (" + (report.problems.empty() ? std::string("invalid") : report.problems.front()) + ")");
      continue;
    }
    auto key = smiles::canonical_smiles(g);
    if (!seen.insert(key).second) {
      ++d.stats.duplicate;
      drop("duplicate of " + key);
      continue;
    }
    d.graphs.push_back(g);
    d.keys.push_back(std::move(key));
  }
  d.stats.kept = d.graphs.size();
  if (d.graphs.empty()) throw InvalidArgument("ingest: no usable molecules in " + path.string());
  return d;
}

std::filesystem::path default_dataset_path() { return chem::data_dir() / "qm9_subset.smi"; }

}  // namespace qmg::pipeline
