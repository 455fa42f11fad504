#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sfg/entry.hpp"

namespace sfg {

struct GenContext;  // generator.hpp

/// A semantic inquiry posed to the environment. Arguments are concept
/// designators: "self", a function label bound earlier, or a dotted
/// attribute path such as "self.actor".
struct InquiryRef {
  std::string name;
  std::vector<std::string> args;

  bool operator==(const InquiryRef&) const = default;
  bool operator<(const InquiryRef& o) const {
    return std::tie(name, args) < std::tie(o.name, o.args);
  }
};

struct ChooserAction {
  enum class Kind { Choose, Identify, Copyhub, OutOfBounds };

  Kind kind = Kind::Choose;
  // Choose: a = grammatical type.
  // Identify: a = function label, b = concept designator.
  // Copyhub: a = target label, b = source label (a receives b's concept).
  // OutOfBounds: a = reason text.
  std::string a;
  std::string b;

  static ChooserAction choose(std::string type);
  static ChooserAction identify(std::string label, std::string concept_ref);
  static ChooserAction copyhub(std::string to, std::string from);
  static ChooserAction out_of_bounds(std::string reason);

  bool operator==(const ChooserAction&) const = default;
};

/// Decision-tree node: either an inquiry with answer-labelled branches or a
/// run of actions with an optional continuation. `then` and branch targets
/// hold zero-or-one / N children via vectors so nodes stay copyable.
struct ChooserNode {
  enum class Kind { Ask, Actions };

  Kind kind = Kind::Actions;
  InquiryRef query;                                          // Ask
  std::vector<std::pair<std::string, ChooserNode>> branches; // Ask, authored order
  std::vector<ChooserAction> actions;                        // Actions
  std::vector<ChooserNode> then;                             // Actions: 0 or 1

  static ChooserNode ask(InquiryRef q,
                         std::vector<std::pair<std::string, ChooserNode>> branches);
  static ChooserNode act(std::vector<ChooserAction> actions);
  static ChooserNode act_then(std::vector<ChooserAction> actions, ChooserNode next);

  bool operator==(const ChooserNode&) const = default;
};

struct Chooser {
  std::string name;
  ChooserNode root;

  bool operator==(const Chooser&) const = default;
};

/// Answers inquiries about the semantic input. Returns nullopt when the
/// environment has no answer for the inquiry/arguments pair.
class SemanticOracle {
public:
  virtual ~SemanticOracle() = default;
  virtual std::optional<std::string> answer(
      const std::string& inquiry, const std::vector<std::string>& concepts) const = 0;
};

/// Result of one chooser evaluation: the chosen type, the identify/copyhub
/// actions encountered along the path (in order), and the inquiry trace.
struct ChooserOutcome {
  std::string chosen;
  std::vector<ChooserAction> actions;
  std::vector<std::pair<InquiryRef, std::string>> trace;
};

/// Walks the tree against the oracle. Identify/copyhub actions are applied
/// to a scratch copy of `ctx` so later inquiry arguments can refer to labels
/// bound earlier on the same path; the caller applies the returned actions
/// to the real context. Throws MissingAnswerError, NoBranchError,
/// NoChoiceError, OutOfBoundsError or BindingConflictError.
ChooserOutcome evaluate_chooser(const Chooser& chooser, const SemanticOracle& oracle,
                                const GenContext& ctx);

/// Prepends unconditional actions to a chooser (used when a collapsed
/// system's actions percolate to a surviving one). An empty sequence returns
/// `base` unchanged; a `choose` in `actions` throws ChoosePercolatedError.
Chooser extend_chooser(const Chooser& base, const std::vector<ChooserAction>& actions);

/// Collects the unconditional action prefix of a chooser: actions reachable
/// before the first inquiry. `choose` and `outOfBounds` actions are skipped
/// (the collapse consumed the choice). Sets `saw_ask`/`saw_skip` so callers
/// can warn about conditional or skipped material.
struct FlattenResult {
  std::vector<ChooserAction> actions;
  bool saw_ask = false;
  bool saw_skipped = false;
};
FlattenResult flatten_unconditional_prefix(const ChooserNode& root);

/// Replaces every choose(t) with t outside `surviving` by an outOfBounds
/// action. Queries and branch structure are retained.
Chooser mark_out_of_bounds(const Chooser& chooser, const TypeSet& surviving);

/// Observed training responses per inquiry name.
using ResponseLog = std::map<std::string, std::set<std::string>>;

/// Replaces branches whose answer never occurred in `observed` with
/// outOfBounds leaves; an ask left with exactly one live branch is elided.
/// Also applies mark_out_of_bounds to surviving actions.
Chooser prune_chooser_by_responses(const Chooser& chooser, const ResponseLog& observed,
                                   const TypeSet& surviving);

}  // namespace sfg
