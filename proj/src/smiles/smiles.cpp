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

#include "qmg/smiles/smiles.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>

#include "qmg/common/error.hpp"
#include "qmg/common/text.hpp"
#include "qmg/mol/canon.hpp"
#include "qmg/mol/rings.hpp"
#include "qmg/mol/valence.hpp"

namespace qmg::smiles {

using mol::BondType;
using mol::Element;
using mol::kMaxAtoms;
using mol::MolecularGraph;

namespace {

std::optional<Element> element_of(char c) {
  switch (c) {
    case 'C': case 'c': return Element::C;
    case 'N': case 'n': return Element::N;
    case 'O': case 'o': return Element::O;
    case 'F': return Element::F;
    default: return std::nullopt;
  }
}

bool is_aromatic_symbol(const std::string& t) { return t == "c" || t == "n" || t == "o"; }

std::optional<BondType> bond_of(char c) {
  switch (c) {
    case '-': return BondType::SINGLE;
    case '=': return BondType::DOUBLE;
    case '#': return BondType::TRIPLE;
    case ':': return BondType::AROMATIC;
    default: return std::nullopt;
  }
}

std::string unsupported(char c) {
  switch (c) {
    case '[': return "bracket atoms are not supported";
    case '%': return "two-digit ring closures are not supported";
    case '/': case '\\': case '@': return "stereo marks are not supported";
    case 'B': case 'S': case 'P': case 'I': case 's': case 'p': case 'b':
      return std::string("unsupported element '") + c + "'";
    default: return std::string("unexpected character '") + c + "'";
  }
}

char bond_symbol(BondType b, bool both_aromatic) {
  switch (b) {
    case BondType::SINGLE: return both_aromatic ? '-' : 0;
    case BondType::DOUBLE: return '=';
    case BondType::TRIPLE: return '#';
    default: return 0;
  }
}

}  // namespace

std::vector<SmilesToken> tokenize(std::string_view s) {
  std::vector<SmilesToken> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    TokenKind kind;
    if (element_of(c)) {
      // "Cl" is a different element, not C followed by l.
      if (c == 'C' && i + 1 < s.size() && s[i + 1] == 'l') throw ParseError("unsupported element 'Cl'", i);
      kind = TokenKind::atom;
    } else if (bond_of(c)) {
      kind = TokenKind::bond;
    } else if (c == '(') {
      kind = TokenKind::branch_open;
    } else if (c == ')') {
      kind = TokenKind::branch_close;
    } else if (c >= '0' && c <= '9') {
      kind = TokenKind::ring_digit;
    } else if (c == '.') {
      kind = TokenKind::dot;
    } else {
      throw ParseError(unsupported(c), i);
    }
    out.push_back({kind, std::string(1, c), i});
  }
  return out;
}

MolecularGraph parse(std::string_view s) {
  const auto tokens = tokenize(s);
  if (tokens.empty()) throw ParseError("empty SMILES", 0);

  MolecularGraph g;
  std::array<bool, kMaxAtoms> aromatic{};
  std::array<std::size_t, kMaxAtoms> offset{};
  std::size_t n = 0;
  std::optional<std::size_t> prev;
  std::optional<std::pair<BondType, std::size_t>> pending_bond;
  std::vector<std::optional<std::size_t>> branch_stack;
  std::vector<std::size_t> branch_offsets;
  struct Open {
    std::size_t atom;
    std::optional<BondType> bond;
    std::size_t offset;
  };
  std::map<char, Open> open_rings;
  bool expect_atom_after_dot = false;

  const auto default_bond = [&](std::size_t a, std::size_t b) {
    return aromatic[a] && aromatic[b] ? BondType::AROMATIC : BondType::SINGLE;
  };
  const auto connect = [&](std::size_t a, std::size_t b, BondType t, std::size_t pos) {
    if (a == b) throw ParseError("ring closure onto the same atom", pos);
    if (g.bond(a, b) != BondType::NONE) throw ParseError("duplicate bond", pos);
    g.set_bond(a, b, t);
  };

  for (const auto& tok : tokens) {
    const char c = tok.text[0];
    switch (tok.kind) {
      case TokenKind::atom: {
        if (n == kMaxAtoms) throw ParseError("more than 9 heavy atoms", tok.position);
        const std::size_t a = n++;
        g.set_atom(a, *element_of(c));
        aromatic[a] = is_aromatic_symbol(tok.text);
        offset[a] = tok.position;
        if (prev) {
          const BondType t = pending_bond ? pending_bond->first : default_bond(*prev, a);
          connect(*prev, a, t, tok.position);
        } else if (pending_bond) {
          throw ParseError("bond without a preceding atom", pending_bond->second);
        }
        pending_bond.reset();
        prev = a;
        expect_atom_after_dot = false;
        break;
      }
      case TokenKind::bond:
        if (!prev) throw ParseError("bond without a preceding atom", tok.position);
        if (pending_bond) throw ParseError("two consecutive bonds", tok.position);
        pending_bond = std::make_pair(*bond_of(c), tok.position);
        break;
      case TokenKind::branch_open:
        if (!prev || pending_bond) throw ParseError("branch without a preceding atom", tok.position);
        branch_stack.push_back(prev);
        branch_offsets.push_back(tok.position);
        break;
      case TokenKind::branch_close:
        if (branch_stack.empty()) throw ParseError("unmatched ')'", tok.position);
        if (pending_bond) throw ParseError("bond without a following atom", pending_bond->second);
        prev = branch_stack.back();
        branch_stack.pop_back();
        branch_offsets.pop_back();
        break;
      case TokenKind::ring_digit: {
        if (!prev) throw ParseError("ring digit without a preceding atom", tok.position);
        const auto it = open_rings.find(c);
        if (it == open_rings.end()) {
          std::optional<BondType> b;
          if (pending_bond) b = pending_bond->first;
          open_rings[c] = Open{*prev, b, tok.position};
        } else {
          const auto& o = it->second;
          std::optional<BondType> b = o.bond;
          if (pending_bond) {
            if (b && *b != pending_bond->first) throw ParseError("conflicting ring-closure bonds", tok.position);
            b = pending_bond->first;
          }
          connect(o.atom, *prev, b ? *b : default_bond(o.atom, *prev), tok.position);
          open_rings.erase(it);
        }
        pending_bond.reset();
        break;
      }
      case TokenKind::dot:
        if (!prev || pending_bond || expect_atom_after_dot) throw ParseError("misplaced '.'", tok.position);
        if (!branch_stack.empty()) throw ParseError("'.' inside a branch", tok.position);
        prev.reset();
        expect_atom_after_dot = true;
        break;
    }
  }
  if (pending_bond) throw ParseError("bond without a following atom", pending_bond->second);
  if (!branch_stack.empty()) throw ParseError("unmatched '('", branch_offsets.back());
  if (!open_rings.empty()) {
    std::size_t pos = s.size();
    for (const auto& [d, o] : open_rings) pos = std::min(pos, o.offset);
    throw ParseError("unclosed ring bond", pos);
  }
  if (expect_atom_after_dot) throw ParseError("trailing '.'", s.size() - 1);

  for (std::size_t a = 0; a < n; ++a) {
    if (!aromatic[a]) continue;
    bool has = false;
    for (const auto b : g.neighbors(a)) has = has || g.bond(a, b) == BondType::AROMATIC;
    if (!has) throw ParseError("aromatic atom outside an aromatic ring", offset[a]);
  }
  for (std::size_t a = 0; a < n; ++a) {
    int used = 0;
    for (const auto b : g.neighbors(a)) used += mol::bond_order(g.bond(a, b));
    if (used > mol::max_valence(g.atom(a))) throw ParseError("valence exceeded", offset[a]);
  }
  const auto report = mol::valence_valid(g, /*require_connected=*/false);
  if (!report.valid) {
    std::size_t pos = s.size() - 1;
    for (std::size_t a = 0; a < n; ++a) {
      if (aromatic[a]) {
        pos = offset[a];
        break;
      }
    }
    throw ParseError("invalid aromatic system: " + (report.problems.empty() ? std::string("?") : report.problems[0]), pos);
  }
  return g;
}

std::string write(const MolecularGraph& g, std::span<const std::size_t> order) {
  const auto report = mol::valence_valid(g, /*require_connected=*/false);
  if (!report.valid) {
    throw InvalidArgument("write: graph is not valid: " + (report.problems.empty() ? std::string() : report.problems[0]));
  }
  std::vector<std::size_t> priority(order.begin(), order.end());
  if (priority.empty()) priority = g.atom_indices();
  std::array<std::size_t, kMaxAtoms> pos;
  pos.fill(kMaxAtoms);
  for (std::size_t k = 0; k < priority.size(); ++k) {
    if (priority[k] >= kMaxAtoms || g.atom(priority[k]) == Element::PAD || pos[priority[k]] != kMaxAtoms) {
      throw InvalidArgument("write: order must list distinct real atoms");
    }
    pos[priority[k]] = k;
  }
  if (priority.size() != g.atom_count()) throw InvalidArgument("write: order must list every atom");

  std::array<bool, kMaxAtoms> aromatic{};
  for (std::size_t i = 0; i < kMaxAtoms; ++i)
    for (std::size_t j = 0; j < kMaxAtoms; ++j) aromatic[i] = aromatic[i] || g.bond(i, j) == BondType::AROMATIC;

  const auto sorted_neighbors = [&](std::size_t v) {
    auto nb = g.neighbors(v);
    std::sort(nb.begin(), nb.end(), [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
    return nb;
  };

  // Pass 1: spanning forest, ring closures (opened at the earlier atom).
  std::array<bool, kMaxAtoms> visited{};
  std::array<std::vector<std::size_t>, kMaxAtoms> children;
  std::array<std::vector<std::size_t>, kMaxAtoms> opens;   // partner atoms
  std::array<std::vector<std::size_t>, kMaxAtoms> closes;  // partner atoms
  std::vector<std::size_t> roots;
  const auto dfs = [&](auto&& self, std::size_t v, std::optional<std::size_t> parent) -> void {
    visited[v] = true;
    for (const auto w : sorted_neighbors(v)) {
      if (parent && w == *parent) continue;
      if (visited[w]) {
        // Back edge to an ancestor: record once, from the descendant side.
        if (std::find(opens[v].begin(), opens[v].end(), w) == opens[v].end()) {
          opens[w].push_back(v);
          closes[v].push_back(w);
        }
      } else {
        children[v].push_back(w);
        self(self, w, v);
      }
    }
  };
  for (const auto v : priority) {
    if (!visited[v]) {
      roots.push_back(v);
      dfs(dfs, v, std::nullopt);
    }
  }

  // Pass 2: emission.
  std::string out;
  std::array<bool, 10> digit_used{};
  std::map<std::pair<std::size_t, std::size_t>, int> digit_of;
  const auto emit = [&](auto&& self, std::size_t v) -> void {
    const char sym = mol::element_symbol(g.atom(v));
    out += aromatic[v] ? static_cast<char>(sym - 'A' + 'a') : sym;
    for (const auto w : opens[v]) {
      int d = 1;
      while (d < 10 && digit_used[d]) ++d;
      if (d == 10) {
        d = 0;
        if (digit_used[0]) throw InvalidArgument("write: too many open rings");
      }
      digit_used[d] = true;
      digit_of[{v, w}] = d;
      if (const char b = bond_symbol(g.bond(v, w), aromatic[v] && aromatic[w])) out += b;
      out += static_cast<char>('0' + d);
    }
    for (const auto w : closes[v]) {
      const int d = digit_of.at({w, v});
      digit_used[d] = false;
      out += static_cast<char>('0' + d);
    }
    const auto& ch = children[v];
    for (std::size_t k = 0; k < ch.size(); ++k) {
      const bool branch = k + 1 < ch.size();
      if (branch) out += '(';
      if (const char b = bond_symbol(g.bond(v, ch[k]), aromatic[v] && aromatic[ch[k]])) out += b;
      self(self, ch[k]);
      if (branch) out += ')';
    }
  };
  for (std::size_t r = 0; r < roots.size(); ++r) {
    if (r > 0) out += '.';
    emit(emit, roots[r]);
  }
  return out;
}

std::string canonical_smiles(const MolecularGraph& g) {
  const auto report = mol::valence_valid(g, /*require_connected=*/false);
  if (!report.valid) throw InvalidArgument("canonical_smiles: graph is not valid");
  const auto kek = *mol::kekulize(g);
  const auto arom = mol::perceive_aromaticity(kek, mol::find_rings(kek));
  const auto labelled = mol::aromatic_form(kek, arom);
  std::array<int, kMaxAtoms> labels{};
  for (std::size_t i = 0; i < kMaxAtoms; ++i) labels[i] = static_cast<int>(kek.atom(i)) * 2 + (arom.pi_atom[i] ? 1 : 0);

  std::vector<std::size_t> perm = mol::canonical_order(labelled, labels);
  const std::size_t n = perm.size();
  for (std::size_t i = 0; i < kMaxAtoms; ++i) {
    if (g.atom(i) == Element::PAD) perm.push_back(i);
  }
  const auto p = mol::permute(labelled, perm);
  std::array<bool, kMaxAtoms> needs{};
  for (std::size_t i = 0; i < kMaxAtoms; ++i) needs[i] = arom.pi_atom[perm[i]];
  const auto kp = mol::kekulize(p, needs);
  if (!kp) throw InvalidArgument("canonical_smiles: aromatic system lost its Kekule structure");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return write(*kp, order);
}

std::vector<SmilesLine> read_smiles_file(const std::filesystem::path& path) {
  std::vector<SmilesLine> out;
  const auto lines = read_lines(path);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto t = trim(lines[k]);
    if (t.empty() || t.front() == '#') continue;
    const auto end = t.find_first_of(" \t");
    out.push_back({k + 1, std::string(t.substr(0, end))});
  }
  return out;
}

}  // namespace qmg::smiles
