#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sfg/chooser.hpp"
#include "sfg/entry.hpp"

namespace sfg {

/// Conjunctive filler specification for an inserted function: the filling
/// constituent must carry every listed type. Empty means unconstrained.
using FillerSpec = TypeSet;

/// Realization statements attached to one grammatical type. Component lists
/// keep first-occurrence order; merging is by unify_constraints.
struct ConstraintSet {
  struct Lexification {
    std::string label;
    bool literal = false;   // true: value is surface text, false: lexicon id
    std::string value;
    bool operator==(const Lexification&) const = default;
  };

  std::vector<std::pair<std::string, FillerSpec>> insertions;
  std::vector<std::pair<std::string, std::string>> conflations;  // unordered pairs
  std::vector<std::pair<std::string, std::string>> orderings;    // before, after
  std::vector<Lexification> lexifications;

  bool empty() const {
    return insertions.empty() && conflations.empty() && orderings.empty() &&
           lexifications.empty();
  }
  const FillerSpec* filler_for(const std::string& label) const {
    for (const auto& [l, f] : insertions)
      if (l == label) return &f;
    return nullptr;
  }
  const Lexification* lexification_for(const std::string& label) const {
    for (const auto& l : lexifications)
      if (l.label == label) return &l;
    return nullptr;
  }
  bool has_label(const std::string& label) const {
    return filler_for(label) != nullptr;
  }
  /// Order-insensitive content equality (components compared as sets).
  bool same_content(const ConstraintSet& o) const;

  bool operator==(const ConstraintSet&) const = default;
};

/// A system: a named axiom with an entry condition, exhaustive and mutually
/// exclusive output types, and the name of the chooser that decides among
/// them ("" when the system is never meant to fire, e.g. word-class axioms).
struct System {
  std::string name;
  EntryExpr entry;  // stored in normalized or-of-ands form
  std::vector<std::string> outputs;
  std::string chooser;

  bool operator==(const System&) const = default;
};

enum class LatticeMode { Authored, Extracted };

/// The grammar proper: type inventory, systems in definition order,
/// per-type realization constraints and the chooser trees referenced by the
/// systems. Lexicon is carried separately (see io.hpp).
struct TypeLattice {
  std::string root = "start";
  std::vector<std::string> types;  // definition order; root first
  std::vector<System> systems;     // definition order
  std::map<std::string, ConstraintSet> constraints;  // by type; absent = empty
  std::map<std::string, Chooser> choosers;           // by chooser name
  std::string word_root = "word";
  bool extracted = false;  // relaxes validation for machine-built grammars

  /// Rebuilds the lookup indexes below; call after any structural edit.
  void rebuild_indexes();

  bool has_type(const std::string& t) const { return type_index_.count(t) > 0; }
  int type_order(const std::string& t) const;
  const System* system(const std::string& name) const;
  /// The system introducing `t` in its outputs; nullptr for the root.
  const System* introducing_system(const std::string& t) const;
  const ConstraintSet& constraints_of(const std::string& t) const;
  const Chooser* chooser_of(const System& s) const;
  /// The system whose entry is exactly the root atom; nullptr if absent.
  const System* root_system() const;
  TypeSet all_types() const { return TypeSet(types.begin(), types.end()); }
  /// word_root plus everything reachable downward from it through systems.
  TypeSet word_class_types() const;

private:
  std::unordered_map<std::string, int> type_index_;
  std::unordered_map<std::string, int> system_index_;
  std::unordered_map<std::string, int> intro_index_;  // type -> systems[] pos
};

struct ValidationIssue {
  std::string code;    // stable tag, e.g. "dangling-type"
  std::string where;   // system/type/chooser name
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Structural well-formedness check. Authored mode additionally requires at
/// least two outputs per system and exactly one choose per chooser path;
/// Extracted mode permits single-output systems, zero systems and
/// outOfBounds-terminated chooser paths.
ValidationReport validate_lattice(const TypeLattice& g, LatticeMode mode);

/// Systems whose entry mentions `type`, in definition order.
std::vector<const System*> who_has_in_entry(const TypeLattice& g,
                                            const std::string& type);

/// Merges two constraint sets. Insertions on the same label combine their
/// filler requirements conjunctively (set union); duplicate conflations,
/// orderings and identical lexifications collapse. Throws UnificationError
/// when one label gets sibling filler types (outputs of one system) or two
/// different lexifications.
ConstraintSet unify_constraints(const ConstraintSet& a, const ConstraintSet& b,
                                const TypeLattice& g);

}  // namespace sfg
