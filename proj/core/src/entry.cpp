#include "sfg/entry.hpp"

#include <algorithm>
#include <cassert>

namespace sfg {
namespace {

using Conjunct = std::vector<std::string>;  // atoms, first-occurrence order

void append_unique(Conjunct& c, const std::string& atom) {
  if (std::find(c.begin(), c.end(), atom) == c.end()) c.push_back(atom);
}

// Recursive DNF build: returns the disjuncts of `e` as atom lists.
std::vector<Conjunct> to_conjuncts(const EntryExpr& e) {
  switch (e.kind) {
    case EntryExpr::Kind::Atom:
      return {{e.atom}};
    case EntryExpr::Kind::Or: {
      std::vector<Conjunct> out;
      for (const auto& kid : e.kids) {
        auto sub = to_conjuncts(kid);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case EntryExpr::Kind::And: {
      std::vector<Conjunct> acc = {{}};
      for (const auto& kid : e.kids) {
        auto sub = to_conjuncts(kid);
        std::vector<Conjunct> next;
        next.reserve(acc.size() * sub.size());
        for (const auto& left : acc)
          for (const auto& right : sub) {
            Conjunct merged = left;
            for (const auto& atom : right) append_unique(merged, atom);
            next.push_back(std::move(merged));
          }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

// Drops duplicate conjuncts (set equality) and conjuncts strictly containing
// another conjunct. Survivors keep first-occurrence order.
std::vector<Conjunct> canonicalize(std::vector<Conjunct> conjs) {
  std::vector<TypeSet> keys;
  std::vector<Conjunct> unique;
  for (auto& c : conjs) {
    TypeSet key(c.begin(), c.end());
    bool seen = false;
    for (const auto& k : keys)
      if (k == key) {
        seen = true;
        break;
      }
    if (!seen) {
      keys.push_back(std::move(key));
      unique.push_back(std::move(c));
    }
  }
  std::vector<Conjunct> kept;
  for (size_t i = 0; i < unique.size(); ++i) {
    bool absorbed = false;
    for (size_t j = 0; j < unique.size() && !absorbed; ++j)
      if (j != i &&
          std::includes(keys[i].begin(), keys[i].end(), keys[j].begin(),
                        keys[j].end()) &&
          keys[j].size() < keys[i].size())
        absorbed = true;
    if (!absorbed) kept.push_back(std::move(unique[i]));
  }
  return kept;
}

EntryExpr from_conjuncts(const std::vector<Conjunct>& conjs) {
  std::vector<EntryExpr> ands;
  ands.reserve(conjs.size());
  for (const auto& c : conjs) {
    std::vector<EntryExpr> atoms;
    atoms.reserve(c.size());
    for (const auto& a : c) atoms.push_back(EntryExpr::make_atom(a));
    ands.push_back(EntryExpr::make_and(std::move(atoms)));
  }
  return EntryExpr::make_or(std::move(ands));
}

}  // namespace

EntryExpr EntryExpr::make_atom(std::string name) {
  EntryExpr e;
  e.kind = Kind::Atom;
  e.atom = std::move(name);
  return e;
}

EntryExpr EntryExpr::make_and(std::vector<EntryExpr> kids) {
  EntryExpr e;
  e.kind = Kind::And;
  e.kids = std::move(kids);
  return e;
}

EntryExpr EntryExpr::make_or(std::vector<EntryExpr> kids) {
  EntryExpr e;
  e.kind = Kind::Or;
  e.kids = std::move(kids);
  return e;
}

bool is_dnf(const EntryExpr& e) {
  if (e.kind != EntryExpr::Kind::Or) return false;
  for (const auto& conj : e.kids) {
    if (conj.kind != EntryExpr::Kind::And || conj.kids.empty()) return false;
    for (const auto& atom : conj.kids)
      if (atom.kind != EntryExpr::Kind::Atom) return false;
  }
  return true;
}

bool is_empty_dnf(const EntryExpr& e) {
  return e.kind == EntryExpr::Kind::Or && e.kids.empty();
}

bool is_single_atom_dnf(const EntryExpr& e) {
  return is_dnf(e) && e.kids.size() == 1 && e.kids[0].kids.size() == 1;
}

const std::string& single_atom(const EntryExpr& e) {
  assert(is_single_atom_dnf(e));
  return e.kids[0].kids[0].atom;
}

std::vector<std::string> entry_atoms(const EntryExpr& e) {
  std::vector<std::string> out;
  auto walk = [&](const EntryExpr& node, auto&& self) -> void {
    if (node.kind == EntryExpr::Kind::Atom) {
      if (std::find(out.begin(), out.end(), node.atom) == out.end())
        out.push_back(node.atom);
      return;
    }
    for (const auto& kid : node.kids) self(kid, self);
  };
  walk(e, walk);
  return out;
}

bool entry_mentions(const EntryExpr& e, const std::string& atom) {
  if (e.kind == EntryExpr::Kind::Atom) return e.atom == atom;
  for (const auto& kid : e.kids)
    if (entry_mentions(kid, atom)) return true;
  return false;
}

EntryExpr normalize_entry(const EntryExpr& e) {
  return from_conjuncts(canonicalize(to_conjuncts(e)));
}

EntryExpr remove_unsatisfiable(const EntryExpr& dnf, const TypeSet& goal) {
  assert(is_dnf(dnf));
  std::vector<EntryExpr> kept;
  for (const auto& conj : dnf.kids) {
    bool ok = true;
    for (const auto& atom : conj.kids)
      if (!goal.count(atom.atom)) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(conj);
  }
  return EntryExpr::make_or(std::move(kept));
}

bool entry_satisfied(const EntryExpr& dnf, const TypeSet& selected) {
  assert(is_dnf(dnf) || is_empty_dnf(dnf));
  for (const auto& conj : dnf.kids) {
    bool ok = true;
    for (const auto& atom : conj.kids)
      if (!selected.count(atom.atom)) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

EntryExpr dnf_substitute(const std::string& supertype, const std::string& t,
                         const EntryExpr& dnf) {
  assert(is_dnf(dnf) || is_empty_dnf(dnf));
  std::vector<Conjunct> conjs;
  for (const auto& conj : dnf.kids) {
    Conjunct c;
    for (const auto& atom : conj.kids)
      append_unique(c, atom.atom == t ? supertype : atom.atom);
    conjs.push_back(std::move(c));
  }
  return from_conjuncts(canonicalize(std::move(conjs)));
}

std::string entry_to_string(const EntryExpr& e) {
  switch (e.kind) {
    case EntryExpr::Kind::Atom:
      return e.atom;
    case EntryExpr::Kind::And: {
      if (e.kids.size() == 1) return entry_to_string(e.kids[0]);
      std::string s = "(AND";
      for (const auto& kid : e.kids) s += " " + entry_to_string(kid);
      return s + ")";
    }
    case EntryExpr::Kind::Or: {
      if (e.kids.empty()) return "(OR)";
      if (e.kids.size() == 1) return entry_to_string(e.kids[0]);
      std::string s = "(OR";
      for (const auto& kid : e.kids) s += " " + entry_to_string(kid);
      return s + ")";
    }
  }
  return "";
}

}  // namespace sfg
