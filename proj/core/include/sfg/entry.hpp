#pragma once

#include <set>
#include <string>
#include <vector>

namespace sfg {

/// Sorted set of type names. Used for selection sets, goal sets and filler
/// specifications; std::set keeps iteration deterministic.
using TypeSet = std::set<std::string>;

/// Boolean expression over type names gating a system's entry condition.
/// Normalized form is or-of-ands: Or at the top, each child an And of Atoms.
struct EntryExpr {
  enum class Kind { Atom, And, Or };

  Kind kind = Kind::Atom;
  std::string atom;             // Kind::Atom only
  std::vector<EntryExpr> kids;  // Kind::And / Kind::Or only

  static EntryExpr make_atom(std::string name);
  static EntryExpr make_and(std::vector<EntryExpr> kids);
  static EntryExpr make_or(std::vector<EntryExpr> kids);

  bool operator==(const EntryExpr&) const = default;
};

/// True if `e` has the canonical or-of-ands shape produced by
/// normalize_entry (atoms only inside Ands, Ands only inside the Or).
bool is_dnf(const EntryExpr& e);

/// True for a DNF with zero disjuncts, i.e. an unsatisfiable entry.
bool is_empty_dnf(const EntryExpr& e);

/// True for a DNF consisting of exactly one conjunct with exactly one atom.
bool is_single_atom_dnf(const EntryExpr& e);

/// The sole atom of a single-atom DNF. Precondition: is_single_atom_dnf(e).
const std::string& single_atom(const EntryExpr& e);

/// All distinct atoms of an expression, in first-occurrence order.
std::vector<std::string> entry_atoms(const EntryExpr& e);

/// True if `atom` occurs anywhere in `e`.
bool entry_mentions(const EntryExpr& e, const std::string& atom);

/// Rewrites an arbitrary expression into canonical or-of-ands form:
/// duplicate atoms within a conjunct are dropped, duplicate conjuncts are
/// dropped (set equality), and any conjunct that is a strict superset of
/// another is absorbed. Conjuncts keep first-occurrence order.
EntryExpr normalize_entry(const EntryExpr& e);

/// Drops every conjunct containing an atom outside `goal`. May return an
/// empty Or, meaning the entry can never be satisfied within `goal`.
EntryExpr remove_unsatisfiable(const EntryExpr& dnf, const TypeSet& goal);

/// True if some conjunct of `dnf` is wholly contained in `selected`.
bool entry_satisfied(const EntryExpr& dnf, const TypeSet& selected);

/// Replaces atom `t` with `supertype` in every conjunct of `dnf`, then
/// re-normalizes. Used when excising a pseudotype during extraction.
EntryExpr dnf_substitute(const std::string& supertype, const std::string& t,
                         const EntryExpr& dnf);

/// Compact textual rendering, e.g. "(OR (AND a b) c)"; single-atom conjuncts
/// print bare. Intended for messages and reports.
std::string entry_to_string(const EntryExpr& e);

}  // namespace sfg
