#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sfg/chooser.hpp"
#include "sfg/lattice.hpp"
#include "sfg/lexicon.hpp"
#include "sfg/semantics.hpp"

namespace sfg {

/// Union-find over function labels; conflated labels share one hub.
/// Representatives are chosen lexicographically so results are independent
/// of union order.
class LabelPartition {
public:
  const std::string& find(const std::string& label) const;
  void unite(const std::string& a, const std::string& b);
  bool same(const std::string& a, const std::string& b) const {
    return find(a) == find(b);
  }

private:
  mutable std::map<std::string, std::string> parent_;
};

/// Mutable state of one constituent's traversal.
struct GenContext {
  const TypeLattice* lattice = nullptr;
  const SemanticSpec* spec = nullptr;
  std::string self_concept;

  TypeSet selected;
  ConstraintSet accumulated;
  LabelPartition coref;
  std::map<std::string, std::string> bindings;  // representative -> concept

  std::vector<std::string> fired;  // system names, firing order
  std::vector<std::pair<InquiryRef, std::string>> inquiries;

  /// Concept bound to `label`'s coreference class, if any.
  std::optional<std::string> resolve_label(const std::string& label) const;
  /// Resolves an inquiry argument / identify target: "self", "self.path",
  /// a bound label, or a bound label with a dotted continuation.
  std::optional<std::string> resolve_designator(const std::string& ref) const;
  /// Applies identify/copyhub; choose/outOfBounds are rejected here.
  void apply_action(const ChooserAction& action);
  /// Records a conflation in the partition and reconciles bindings.
  void conflate(const std::string& a, const std::string& b);

private:
  void bind(const std::string& label, const std::string& concept_id);
};

/// One realized constituent: the conflated function labels it serves (in
/// first-insertion order), the conjunctive filler requirement, and either a
/// surface spelling or a recursively generated child structure.
struct Constituent {
  std::vector<std::string> labels;
  TypeSet filler_types;
  std::optional<std::string> spelling;
  std::optional<std::string> concept_id;
  std::optional<std::string> lex_item;  // lexicon id behind `spelling`, if any
  std::vector<struct FeatureStructure> child;  // 0 or 1
};

struct FeatureStructure {
  std::vector<Constituent> constituents;  // linear order
};

/// What the caller of generate_sentence gets back.
struct Realization {
  std::string text;
  TypeSet used_types;                              // union over constituents
  std::map<std::string, std::set<std::string>> inquiry_log;
  int steps = 0;    // systems fired
  int queries = 0;  // inquiries answered
};

/// Realization plus the artifacts needed by telemetry and extraction.
struct SentenceRun {
  Realization realization;
  FeatureStructure structure;
  TypeSet used_fillers;              // filler types of realized insertions
  std::set<std::string> used_items;  // lexical item ids that produced text
};

/// Runs the system agenda for one constituent: repeatedly fires the first
/// (definition-order) unfired system whose entry the selection set
/// satisfies, consulting its chooser. `ctx.selected` must hold the root.
void traverse(const TypeLattice& g, const SemanticOracle& oracle, GenContext& ctx);

/// Generates the constituent for `concept_id` (traversal + constraint
/// resolution + recursion into bound sub-constituents).
FeatureStructure generate_constituent(const TypeLattice& g, const Lexicon& lexicon,
                                      const SemanticSpec& spec,
                                      const std::string& concept_id);

/// Full pipeline for one semantic spec, from the spec's root concept to
/// surface text (capitalized, period-terminated).
SentenceRun generate_sentence_run(const TypeLattice& g, const Lexicon& lexicon,
                                  const SemanticSpec& spec);
Realization generate_sentence(const TypeLattice& g, const Lexicon& lexicon,
                              const SemanticSpec& spec);

/// Token sequence of a structure, depth-first, silent constituents skipped.
std::vector<std::string> structure_tokens(const FeatureStructure& fs);

}  // namespace sfg
