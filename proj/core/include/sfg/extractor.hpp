#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sfg/chooser.hpp"
#include "sfg/generator.hpp"
#include "sfg/lattice.hpp"
#include "sfg/lexicon.hpp"
#include "sfg/semantics.hpp"

namespace sfg {

/// The grammatical types an application needs, as collected from a training
/// corpus (or assembled by hand).
struct GoalTypeSet {
  TypeSet types;
  std::string provenance;   // free text, e.g. "trained on 50 sentences"
  int sentence_count = 0;
};

struct ExtractionOptions {
  /// Replace never-observed chooser branches with out-of-bounds leaves and
  /// elide single-branch inquiries. Requires `responses`.
  bool prune_choosers = false;
  const ResponseLog* responses = nullptr;
};

struct ExtractionReport {
  int source_systems = 0;
  int kept_systems = 0;
  int source_types = 0;
  int kept_types = 0;
  TypeSet excised_pseudotypes;
  TypeSet dropped_types;  // goal misses (plus their whole systems, sometimes)
  std::set<std::string> collapsed_systems;
  std::set<std::string> unreachable_systems;  // entry unsatisfiable within goal
  std::vector<std::pair<std::string, std::string>> raised_constraints;  // from, to
  std::vector<std::pair<std::string, std::string>> percolated_actions;  // from, to
  std::vector<std::string> warnings;
};

/// Result of extraction: the subgrammar plus what happened to get there.
struct ExtractionResult {
  TypeLattice grammar;
  ExtractionReport report;
};

/// Extracts the application-tuned subgrammar reaching exactly the goal
/// types. Depth-first over the lattice from the root: systems whose revised
/// entry keeps a real disjunction or more than one surviving output are
/// kept; degenerate systems collapse, their sole surviving output becomes a
/// pseudotype whose constraints are raised to the path's start type and
/// whose chooser actions percolate to the next kept system. Surviving
/// choosers are out-of-bounds-marked against their own system's outputs.
/// Throws InvalidGoalError when the goal set leaves the result inconsistent
/// (e.g. a filler or the root unreachable).
ExtractionResult extract_subgrammar(const TypeLattice& g, const GoalTypeSet& goal,
                                    const ExtractionOptions& options = {});

/// Sublexicon rule: closed-class items survive only if actually used in
/// training; open-class items survive if any of their word classes did.
/// `usage` holds ids of items that produced text during training.
Lexicon extract_sublexicon(const Lexicon& lexicon, const TypeSet& surviving_types,
                           const std::set<std::string>& usage);

struct SentenceVerdict {
  enum class Status { Equal, Mismatch, FullError, SubError };
  int index = 0;  // 1-based position in the corpus
  Status status = Status::Equal;
  std::string full_text;
  std::string sub_text;
  bool used_types_consistent = true;  // sub used == full used ∩ sub types
  int full_steps = 0;  // systems fired + inquiries answered
  int sub_steps = 0;
  std::string detail;  // error text for the two error statuses
};

struct ConsistencyReport {
  std::vector<SentenceVerdict> verdicts;
  long full_steps_total = 0;
  long sub_steps_total = 0;
  bool consistent() const;
  double step_ratio() const;  // sub/full; 0 when full total is 0
};

/// Regenerates every corpus sentence with both grammars and compares.
ConsistencyReport verify_consistency(const TypeLattice& full, const Lexicon& full_lex,
                                     const TypeLattice& sub, const Lexicon& sub_lex,
                                     const Corpus& corpus);

inline int step_metric(const Realization& r) { return r.steps + r.queries; }

}  // namespace sfg
