#include "sfg/extractor.hpp"

#include <algorithm>
#include <cassert>

#include "sfg/errors.hpp"

namespace sfg {

namespace {

// Percolation buffer: actions of collapsed systems riding down the current
// path until a kept system absorbs them. Each entry remembers its origin
// for the report.
using Pending = std::vector<std::pair<std::string, std::vector<ChooserAction>>>;

struct ExtractState {
  const TypeLattice& src;
  const TypeSet& goal;
  std::map<std::string, EntryExpr> entry;                    // working entries
  std::map<std::string, std::vector<std::string>> outputs;   // kept systems
  std::map<std::string, ConstraintSet> constraints;          // working, by type
  std::vector<std::string> pushed;                           // push order
  std::set<std::string> pushed_set;
  std::set<std::string> collapsed;
  std::map<std::string, Chooser> working_choosers;           // by system name
  ExtractionReport report;
};

void warn(ExtractState& st, std::string msg) {
  st.report.warnings.push_back(std::move(msg));
}

ConstraintSet merged(ExtractState& st, const ConstraintSet& a, const ConstraintSet& b) {
  return unify_constraints(a, b, st.src);
}

// Folds `pending` into the chooser of system `s` (which stays in the
// subgrammar). Systems without a chooser get a synthetic actions-only one.
void attach_pending(ExtractState& st, const System& s, Pending& pending) {
  if (pending.empty()) return;
  std::vector<ChooserAction> acc;
  for (const auto& [from, actions] : pending)
    acc.insert(acc.end(), actions.begin(), actions.end());
  if (acc.empty()) {
    pending.clear();
    return;
  }
  Chooser base;
  auto it = st.working_choosers.find(s.name);
  if (it != st.working_choosers.end()) {
    base = it->second;
  } else if (const Chooser* c = st.src.chooser_of(s)) {
    base = *c;
  } else {
    base.name = s.name + "_percolated";
    base.root = ChooserNode::act({});
    warn(st, "system '" + s.name +
                 "' has no chooser; percolated actions form a synthetic one");
  }
  st.working_choosers[s.name] = extend_chooser(base, acc);
  for (const auto& [from, actions] : pending)
    if (!actions.empty())
      st.report.percolated_actions.emplace_back(from, s.name);
  pending.clear();
}

void traverse_type(ExtractState& st, const std::string& type,
                   const std::string& supertype, const ConstraintSet& inherited,
                   Pending& pending, std::vector<std::string>& path);

void traverse_system(ExtractState& st, const System& s, const std::string& type,
                     const std::string& supertype, const ConstraintSet& inherited,
                     Pending& pending, std::vector<std::string>& path) {
  EntryExpr& entry = st.entry.at(s.name);
  std::vector<std::string> inter;
  for (const auto& o : s.outputs)
    if (st.goal.count(o)) inter.push_back(o);
  if (inter.empty()) return;

  const bool degenerate = is_single_atom_dnf(entry) && inter.size() == 1 &&
                          !st.pushed_set.count(s.name);
  if (degenerate) {
    const std::string& out = inter.front();
    st.collapsed.insert(s.name);
    st.report.collapsed_systems.insert(s.name);
    st.report.excised_pseudotypes.insert(out);
    if (const Chooser* c = st.src.chooser_of(s)) {
      FlattenResult flat = flatten_unconditional_prefix(c->root);
      if (flat.saw_ask)
        warn(st, "chooser '" + c->name + "' of collapsed system '" + s.name +
                     "' consults inquiries; only its unconditional prefix percolates");
      if (!flat.actions.empty()) pending.emplace_back(s.name, flat.actions);
    }
    const ConstraintSet& own = st.src.constraints_of(out);
    if (!own.empty())
      st.report.raised_constraints.emplace_back(out, supertype);
    ConstraintSet carried = merged(st, own, inherited);
    traverse_type(st, out, supertype, carried, pending, path);
    return;
  }

  if (!st.pushed_set.count(s.name)) {
    entry = dnf_substitute(supertype, type, entry);
    st.outputs[s.name] = inter;
    st.pushed.push_back(s.name);
    st.pushed_set.insert(s.name);
    attach_pending(st, s, pending);
    for (const auto& o : inter) {
      ConstraintSet none;
      traverse_type(st, o, o, none, pending, path);
    }
    st.constraints[supertype] = merged(st, st.constraints[supertype], inherited);
    return;
  }

  // Revisit through another path: substitute this path's pseudotype and
  // raise what the path accumulated; the system itself is already kept.
  entry = dnf_substitute(supertype, type, entry);
  st.constraints[supertype] = merged(st, st.constraints[supertype], inherited);
  if (!pending.empty()) {
    warn(st, "actions percolated to already-kept system '" + s.name + "'");
    attach_pending(st, s, pending);
  }
}

void traverse_type(ExtractState& st, const std::string& type,
                   const std::string& supertype, const ConstraintSet& inherited,
                   Pending& pending, std::vector<std::string>& path) {
  std::vector<std::string> who;
  for (const auto& s : st.src.systems)
    if (!st.collapsed.count(s.name) &&
        entry_mentions(st.entry.at(s.name), type))
      who.push_back(s.name);

  if (who.empty()) {
    if (!inherited.empty())
      st.constraints[supertype] = merged(st, st.constraints[supertype], inherited);
    if (!pending.empty()) {
      const System* intro = st.src.introducing_system(supertype);
      if (intro) {
        attach_pending(st, *intro, pending);
      } else {
        warn(st, "percolated actions reached the root and were dropped");
        pending.clear();
      }
    }
    return;
  }

  for (const auto& name : who) {
    if (std::find(path.begin(), path.end(), name) != path.end()) {
      warn(st, "system '" + name + "' re-entered on one path; skipped");
      continue;
    }
    if (st.collapsed.count(name)) continue;  // collapsed by an earlier sibling
    path.push_back(name);
    traverse_system(st, *st.src.system(name), type, supertype, inherited, pending,
                    path);
    path.pop_back();
  }
}

}  // namespace

ExtractionResult extract_subgrammar(const TypeLattice& g, const GoalTypeSet& goal_in,
                                    const ExtractionOptions& options) {
  if (options.prune_choosers && !options.responses)
    throw InvalidGoalError("chooser pruning requested without a response log");

  TypeSet goal = goal_in.types;
  const bool added_root = goal.insert(g.root).second;

  ExtractState state{g, goal};
  if (added_root)
    state.report.warnings.push_back("goal set lacked the root type; added");
  state.report.source_systems = static_cast<int>(g.systems.size());
  state.report.source_types = static_cast<int>(g.types.size());

  for (const auto& s : g.systems) {
    EntryExpr revised = remove_unsatisfiable(normalize_entry(s.entry), goal);
    if (is_empty_dnf(revised)) state.report.unreachable_systems.insert(s.name);
    state.entry.emplace(s.name, std::move(revised));
  }
  state.constraints = g.constraints;

  Pending pending;
  std::vector<std::string> path;
  ConstraintSet none;
  traverse_type(state, g.root, g.root, none, pending, path);
  if (!pending.empty()) {
    state.report.warnings.push_back(
        "percolated actions survived the traversal unattached");
    pending.clear();
  }

  // Assemble the subgrammar in source definition order.
  TypeLattice sub;
  sub.root = g.root;
  sub.word_root = g.word_root;
  sub.extracted = true;

  TypeSet surviving{g.root};
  for (const auto& name : state.pushed)
    for (const auto& o : state.outputs.at(name)) surviving.insert(o);

  sub.types.push_back(g.root);
  for (const auto& t : g.types)
    if (t != g.root && surviving.count(t)) sub.types.push_back(t);

  for (const auto& s : g.systems) {
    if (!state.pushed_set.count(s.name)) continue;
    System kept;
    kept.name = s.name;
    kept.entry = state.entry.at(s.name);
    kept.outputs = state.outputs.at(s.name);
    if (is_single_atom_dnf(kept.entry) && kept.outputs.size() == 1)
      state.report.warnings.push_back(
          "system '" + s.name +
          "' degenerated after substitution; re-extraction would collapse it");

    Chooser tree;
    bool have = false;
    if (auto it = state.working_choosers.find(s.name);
        it != state.working_choosers.end()) {
      tree = it->second;
      have = true;
    } else if (const Chooser* c = g.chooser_of(s)) {
      tree = *c;
      have = true;
    }
    if (have) {
      // A chooser evaluated for this system must end in one of its outputs;
      // any other choice means semantics the restricted system cannot
      // express. Marking against the output set (not all surviving types)
      // also keeps per-system copies of shared choosers honest.
      TypeSet legal(kept.outputs.begin(), kept.outputs.end());
      tree = mark_out_of_bounds(tree, legal);
      if (options.prune_choosers)
        tree = prune_chooser_by_responses(tree, *options.responses, legal);
      std::string name = tree.name;
      auto existing = sub.choosers.find(name);
      if (existing != sub.choosers.end() && !(existing->second == tree)) {
        name = tree.name + "__" + s.name;  // shared name, diverged content
        tree.name = name;
        state.report.warnings.push_back("chooser '" + existing->first +
                                        "' diverged between systems; copy renamed '" +
                                        name + "'");
      }
      sub.choosers.emplace(name, tree);
      kept.chooser = name;
    }
    sub.systems.push_back(std::move(kept));
  }

  for (const auto& t : sub.types) {
    auto it = state.constraints.find(t);
    if (it != state.constraints.end() && !it->second.empty())
      sub.constraints.emplace(t, it->second);
  }
  sub.rebuild_indexes();

  state.report.kept_systems = static_cast<int>(sub.systems.size());
  state.report.kept_types = static_cast<int>(sub.types.size());
  for (const auto& t : g.types)
    if (!surviving.count(t) && !state.report.excised_pseudotypes.count(t))
      state.report.dropped_types.insert(t);

  ValidationReport validation = validate_lattice(sub, LatticeMode::Extracted);
  if (!validation.ok())
    throw InvalidGoalError("goal set yields an inconsistent subgrammar:\n" +
                           validation.to_string());

  return {std::move(sub), std::move(state.report)};
}

Lexicon extract_sublexicon(const Lexicon& lexicon, const TypeSet& surviving_types,
                           const std::set<std::string>& usage) {
  Lexicon out;
  for (const auto& item : lexicon.items) {
    bool keep = false;
    if (item.closed_class) {
      keep = usage.count(item.id) > 0;
    } else {
      for (const auto& wc : item.word_classes)
        if (surviving_types.count(wc)) {
          keep = true;
          break;
        }
    }
    if (keep) out.items.push_back(item);
  }
  out.rebuild_index();
  return out;
}

bool ConsistencyReport::consistent() const {
  for (const auto& v : verdicts)
    if (v.status != SentenceVerdict::Status::Equal || !v.used_types_consistent)
      return false;
  return true;
}

double ConsistencyReport::step_ratio() const {
  if (full_steps_total == 0) return 0.0;
  return static_cast<double>(sub_steps_total) /
         static_cast<double>(full_steps_total);
}

ConsistencyReport verify_consistency(const TypeLattice& full, const Lexicon& full_lex,
                                     const TypeLattice& sub, const Lexicon& sub_lex,
                                     const Corpus& corpus) {
  ConsistencyReport report;
  TypeSet sub_types = sub.all_types();
  int index = 0;
  for (const auto& spec : corpus) {
    SentenceVerdict v;
    v.index = ++index;
    Realization full_r;
    try {
      full_r = generate_sentence(full, full_lex, spec);
    } catch (const Error& e) {
      v.status = SentenceVerdict::Status::FullError;
      v.detail = e.what();
      report.verdicts.push_back(std::move(v));
      continue;
    }
    v.full_text = full_r.text;
    v.full_steps = step_metric(full_r);
    report.full_steps_total += v.full_steps;
    try {
      Realization sub_r = generate_sentence(sub, sub_lex, spec);
      v.sub_text = sub_r.text;
      v.sub_steps = step_metric(sub_r);
      report.sub_steps_total += v.sub_steps;
      v.status = v.full_text == v.sub_text ? SentenceVerdict::Status::Equal
                                           : SentenceVerdict::Status::Mismatch;
      TypeSet expected;
      for (const auto& t : full_r.used_types)
        if (sub_types.count(t)) expected.insert(t);
      v.used_types_consistent = sub_r.used_types == expected;
    } catch (const Error& e) {
      v.status = SentenceVerdict::Status::SubError;
      v.detail = e.what();
    }
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

}  // namespace sfg
