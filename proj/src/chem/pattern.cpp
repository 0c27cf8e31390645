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

#include "qmg/chem/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "qmg/common/error.hpp"

namespace qmg::chem {

namespace {

enum AtomKind { k_any, k_aromatic, k_aliphatic, k_z, k_arom_z, k_aliph_z, k_h, k_degree, k_conn, k_valence,
                k_ring_count, k_in_ring, k_ring_size, k_charge };
enum BondKind { b_single, b_double, b_triple, b_aromatic, b_any, b_ring };

struct ElementSym {
  const char* sym;
  int z;
  bool aromatic;
};

// Longest symbols first so "Cl" wins over "C".
constexpr ElementSym kElements[] = {
    {"Cl", 17, false}, {"Br", 35, false}, {"B", 5, false}, {"C", 6, false}, {"N", 7, false}, {"O", 8, false},
    {"F", 9, false},   {"P", 15, false},  {"S", 16, false}, {"I", 53, false}, {"b", 5, true},  {"c", 6, true},
    {"n", 7, true},    {"o", 8, true},    {"p", 15, true},  {"s", 16, true},
};

}  // namespace

class PatternParser {
 public:
  PatternParser(Pattern& p, std::string_view s) : p_(p), s_(s) {}

  void run() {
    std::vector<std::optional<std::size_t>> stack;
    std::optional<std::size_t> prev;
    int pending_bond = -1;
    bool have_bond = false;
    struct Open {
      std::size_t atom;
      int bond;
      bool explicit_bond;
    };
    std::map<char, Open> rings;
    if (s_.empty()) throw ParseError("empty pattern", 0);
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '(') {
        if (!prev) throw ParseError("branch without atom", i_);
        stack.push_back(prev);
        ++i_;
      } else if (c == ')') {
        if (stack.empty()) throw ParseError("unmatched ')'", i_);
        prev = stack.back();
        stack.pop_back();
        ++i_;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        if (!prev) throw ParseError("ring digit without atom", i_);
        const auto it = rings.find(c);
        if (it == rings.end()) {
          rings[c] = Open{*prev, pending_bond, have_bond};
        } else {
          const int b = have_bond ? pending_bond : it->second.explicit_bond ? it->second.bond : -1;
          p_.bonds_.push_back({it->second.atom, *prev, b});
          rings.erase(it);
        }
        pending_bond = -1;
        have_bond = false;
        ++i_;
      } else if (is_bond_char(c)) {
        if (have_bond) throw ParseError("two bond expressions", i_);
        pending_bond = parse_bond_expr();
        have_bond = true;
      } else {
        const std::size_t atom = p_.atom_expr_.size();
        p_.atom_expr_.push_back(parse_atom());
        p_.parent_.push_back(prev ? static_cast<int>(*prev) : -1);
        if (prev) p_.bonds_.push_back({*prev, atom, have_bond ? pending_bond : -1});
        pending_bond = -1;
        have_bond = false;
        prev = atom;
      }
    }
    if (!stack.empty()) throw ParseError("unmatched '('", s_.size());
    if (!rings.empty()) throw ParseError("unclosed ring", s_.size());
    if (have_bond) throw ParseError("dangling bond", s_.size());
    if (p_.atom_expr_.empty()) throw ParseError("pattern without atoms", 0);
  }

 private:
  static bool is_bond_char(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '~' || c == '@' || c == '!';
  }

  int add(Pattern::Node n) {
    p_.nodes_.push_back(std::move(n));
    return static_cast<int>(p_.nodes_.size() - 1);
  }
  int prim(int kind, int value = 0) { return add({Pattern::Node::Op::prim, kind, value, {}}); }
  int combine(Pattern::Node::Op op, std::vector<int> ch) {
    if (ch.size() == 1) return ch[0];
    return add({op, 0, 0, std::move(ch)});
  }

  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }

  std::optional<int> number() {
    std::size_t j = i_;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_) return std::nullopt;
    const int v = std::stoi(std::string(s_.substr(i_, j - i_)));
    i_ = j;
    return v;
  }

  std::optional<int> element() {
    for (const auto& e : kElements) {
      const std::string_view sym(e.sym);
      if (s_.substr(i_, sym.size()) == sym) {
        i_ += sym.size();
        return prim(e.aromatic ? k_arom_z : k_aliph_z, e.z);
      }
    }
    return std::nullopt;
  }

  int parse_atom() {
    const char c = peek();
    if (c == '[') {
      const std::size_t open = i_;
      ++i_;
      const int e = atom_low();
      if (peek() != ']') throw ParseError("expected ']'", i_ < s_.size() ? i_ : open);
      ++i_;
      return e;
    }
    if (c == '*') {
      ++i_;
      return prim(k_any);
    }
    if (c == 'a') {
      ++i_;
      return prim(k_aromatic);
    }
    if (c == 'A') {
      ++i_;
      return prim(k_aliphatic);
    }
    if (const auto e = element()) return *e;
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

  int atom_low() {
    std::vector<int> ch = {atom_or()};
    while (peek() == ';') {
      ++i_;
      ch.push_back(atom_or());
    }
    return combine(Pattern::Node::Op::and_, std::move(ch));
  }
  int atom_or() {
    std::vector<int> ch = {atom_and()};
    while (peek() == ',') {
      ++i_;
      ch.push_back(atom_and());
    }
    return combine(Pattern::Node::Op::or_, std::move(ch));
  }
  int atom_and() {
    std::vector<int> ch = {atom_not()};
    while (true) {
      const char c = peek();
      if (c == '&') {
        ++i_;
        ch.push_back(atom_not());
      } else if (c != '\0' && c != ']' && c != ';' && c != ',') {
        ch.push_back(atom_not());
      } else {
        break;
      }
    }
    return combine(Pattern::Node::Op::and_, std::move(ch));
  }
  int atom_not() {
    if (peek() == '!') {
      ++i_;
      return add({Pattern::Node::Op::not_, 0, 0, {atom_not()}});
    }
    return atom_prim();
  }
  int atom_prim() {
    const std::size_t at = i_;
    const char c = peek();
    switch (c) {
      case '*': ++i_; return prim(k_any);
      case 'a': ++i_; return prim(k_aromatic);
      case 'A': ++i_; return prim(k_aliphatic);
      case '#': {
        ++i_;
        const auto n = number();
        if (!n) throw ParseError("expected atomic number", i_);
        return prim(k_z, *n);
      }
      case 'H': ++i_; return prim(k_h, number().value_or(1));
      case 'D': ++i_; return prim(k_degree, number().value_or(1));
      case 'X': ++i_; return prim(k_conn, number().value_or(1));
      case 'v': ++i_; return prim(k_valence, number().value_or(1));
      case 'R': {
        ++i_;
        const auto n = number();
        return n ? prim(k_ring_count, *n) : prim(k_in_ring);
      }
      case 'r': {
        ++i_;
        const auto n = number();
        return n ? prim(k_ring_size, *n) : prim(k_in_ring);
      }
      case '+':
      case '-': {
        ++i_;
        int magnitude = 1;
        if (const auto n = number()) {
          magnitude = *n;
        } else {
          while (peek() == c) {
            ++i_;
            ++magnitude;
          }
        }
        return prim(k_charge, c == '+' ? magnitude : -magnitude);
      }
      default: break;
    }
    if (const auto e = element()) return *e;
    throw ParseError(std::string("unsupported atom primitive '") + c + "'", at);
  }

  int parse_bond_expr() {
    std::vector<int> ch = {bond_or()};
    while (peek() == ';') {
      ++i_;
      ch.push_back(bond_or());
    }
    return combine(Pattern::Node::Op::and_, std::move(ch));
  }
  int bond_or() {
    std::vector<int> ch = {bond_and()};
    while (peek() == ',') {
      ++i_;
      ch.push_back(bond_and());
    }
    return combine(Pattern::Node::Op::or_, std::move(ch));
  }
  int bond_and() {
    std::vector<int> ch = {bond_not()};
    while (true) {
      if (peek() == '&') {
        ++i_;
        ch.push_back(bond_not());
      } else if (is_bond_char(peek())) {
        ch.push_back(bond_not());
      } else {
        break;
      }
    }
    return combine(Pattern::Node::Op::and_, std::move(ch));
  }
  int bond_not() {
    if (peek() == '!') {
      ++i_;
      return add({Pattern::Node::Op::not_, 0, 0, {bond_not()}});
    }
    const char c = peek();
    ++i_;
    switch (c) {
      case '-': return prim(b_single);
      case '=': return prim(b_double);
      case '#': return prim(b_triple);
      case ':': return prim(b_aromatic);
      case '~': return prim(b_any);
      case '@': return prim(b_ring);
      default: throw ParseError("expected bond primitive", i_ - 1);
    }
  }

  Pattern& p_;
  std::string_view s_;
  std::size_t i_ = 0;
};

Pattern Pattern::compile(std::string_view text) {
  Pattern p;
  p.text_ = std::string(text);
  PatternParser(p, text).run();
  return p;
}

bool Pattern::atom_ok(int expr, const ChemAtom& a) const {
  const auto& n = nodes_[static_cast<std::size_t>(expr)];
  switch (n.op) {
    case Node::Op::not_: return !atom_ok(n.children[0], a);
    case Node::Op::and_:
      return std::all_of(n.children.begin(), n.children.end(), [&](int c) { return atom_ok(c, a); });
    case Node::Op::or_:
      return std::any_of(n.children.begin(), n.children.end(), [&](int c) { return atom_ok(c, a); });
    case Node::Op::prim: break;
  }
  switch (n.kind) {
    case k_any: return true;
    case k_aromatic: return a.aromatic;
    case k_aliphatic: return !a.aromatic;
    case k_z: return a.z == n.value;
    case k_arom_z: return a.aromatic && a.z == n.value;
    case k_aliph_z: return !a.aromatic && a.z == n.value;
    case k_h: return a.total_h == n.value;
    case k_degree: return a.degree == n.value;
    case k_conn: return a.connectivity == n.value;
    case k_valence: return a.valence == n.value;
    case k_ring_count: return a.ring_count == n.value;
    case k_in_ring: return a.ring_count > 0;
    case k_ring_size: return a.smallest_ring == n.value;
    case k_charge: return n.value == 0;  // every atom is neutral
    default: return false;
  }
}

bool Pattern::bond_ok(int expr, const ChemBond& b) const {
  if (expr < 0) return b.type == mol::BondType::SINGLE || b.type == mol::BondType::AROMATIC;
  const auto& n = nodes_[static_cast<std::size_t>(expr)];
  switch (n.op) {
    case Node::Op::not_: return !bond_ok(n.children[0], b);
    case Node::Op::and_:
      return std::all_of(n.children.begin(), n.children.end(), [&](int c) { return bond_ok(c, b); });
    case Node::Op::or_:
      return std::any_of(n.children.begin(), n.children.end(), [&](int c) { return bond_ok(c, b); });
    case Node::Op::prim: break;
  }
  switch (n.kind) {
    case b_single: return b.type == mol::BondType::SINGLE;
    case b_double: return b.type == mol::BondType::DOUBLE;
    case b_triple: return b.type == mol::BondType::TRIPLE;
    case b_aromatic: return b.type == mol::BondType::AROMATIC;
    case b_any: return true;
    case b_ring: return b.in_ring;
    default: return false;
  }
}

// Extends a partial map of pattern atoms [0, k); visit(map) is called on
// every complete match and returns true to stop the search.
template <class Visit>
bool Pattern::search(const ChemView& view, std::vector<std::size_t>& map, std::size_t k, Visit& visit) const {
  if (k == atom_count()) return visit(map);
  std::vector<std::size_t> candidates;
  if (k == 0) {
    candidates.push_back(map[0]);
  } else if (parent_[k] >= 0) {
    for (const auto& b : view.bonds[map[static_cast<std::size_t>(parent_[k])]]) candidates.push_back(b.other);
  } else {
    for (std::size_t a = 0; a < view.atoms.size(); ++a) candidates.push_back(a);
  }
  const auto mapped = map.begin() + static_cast<std::ptrdiff_t>(k);
  for (const auto t : candidates) {
    if (std::find(map.begin(), mapped, t) != mapped) continue;
    if (!atom_ok(atom_expr_[k], view.atoms[t])) continue;
    bool ok = true;
    for (const auto& b : bonds_) {
      std::size_t other;
      if (b.b == k && b.a < k) {
        other = b.a;
      } else if (b.a == k && b.b < k) {
        other = b.b;
      } else {
        continue;
      }
      const auto* vb = view.bond(t, map[other]);
      if (vb == nullptr || !bond_ok(b.expr, *vb)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    map[k] = t;
    if (search(view, map, k + 1, visit)) return true;
  }
  return false;
}

bool Pattern::matches_at(const ChemView& view, std::size_t root) const {
  std::vector<std::size_t> map(atom_count(), root);
  auto visit = [](const std::vector<std::size_t>&) { return true; };
  return search(view, map, 0, visit);
}

bool Pattern::matches(const ChemView& view) const {
  for (std::size_t a = 0; a < view.atoms.size(); ++a) {
    if (matches_at(view, a)) return true;
  }
  return false;
}

std::size_t Pattern::count_unique(const ChemView& view) const {
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t a = 0; a < view.atoms.size(); ++a) {
    std::vector<std::size_t> map(atom_count(), a);
    auto visit = [&](const std::vector<std::size_t>& m) {
      std::vector<std::size_t> key = m;
      std::sort(key.begin(), key.end());
      seen.insert(std::move(key));
      return false;
    };
    search(view, map, 0, visit);
  }
  return seen.size();
}

}  // namespace qmg::chem
