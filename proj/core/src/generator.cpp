#include "sfg/generator.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <set>

#include "sfg/errors.hpp"

namespace sfg {

const std::string& LabelPartition::find(const std::string& label) const {
  auto it = parent_.find(label);
  if (it == parent_.end()) {
    it = parent_.emplace(label, label).first;
    return it->second;
  }
  if (it->second == label) return it->second;
  const std::string& root = find(it->second);
  it->second = root;
  return root;
}

void LabelPartition::unite(const std::string& a, const std::string& b) {
  std::string ra = find(a);
  std::string rb = find(b);
  if (ra == rb) return;
  // Lexicographic winner keeps union order out of the result.
  if (rb < ra) std::swap(ra, rb);
  parent_[rb] = ra;
}

std::optional<std::string> GenContext::resolve_label(const std::string& label) const {
  auto it = bindings.find(coref.find(label));
  if (it == bindings.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> GenContext::resolve_designator(const std::string& ref) const {
  if (ref == "self") return self_concept;
  std::string head = ref;
  std::string rest;
  if (auto dot = ref.find('.'); dot != std::string::npos) {
    head = ref.substr(0, dot);
    rest = ref.substr(dot + 1);
  }
  std::optional<std::string> base;
  if (head == "self")
    base = self_concept;
  else
    base = resolve_label(head);
  if (!base || !spec) return std::nullopt;
  if (rest.empty()) return base;
  return spec->follow(*base, rest);
}

void GenContext::bind(const std::string& label, const std::string& concept_id) {
  const std::string& rep = coref.find(label);
  auto [it, fresh] = bindings.emplace(rep, concept_id);
  if (!fresh && it->second != concept_id)
    throw BindingConflictError("function '" + label + "' already bound to concept '" +
                               it->second + "', cannot rebind to '" + concept_id +
                               "'");
}

void GenContext::conflate(const std::string& a, const std::string& b) {
  std::string ra = coref.find(a);
  std::string rb = coref.find(b);
  if (ra == rb) return;
  auto ita = bindings.find(ra);
  auto itb = bindings.find(rb);
  std::optional<std::string> ca, cb;
  if (ita != bindings.end()) ca = ita->second;
  if (itb != bindings.end()) cb = itb->second;
  if (ca && cb && *ca != *cb)
    throw BindingConflictError("conflating '" + a + "' and '" + b +
                               "' would merge concepts '" + *ca + "' and '" + *cb +
                               "'");
  if (ita != bindings.end()) bindings.erase(ita);
  if (cb) bindings.erase(rb);
  coref.unite(a, b);
  std::optional<std::string> kept = ca ? ca : cb;
  if (kept) bindings.emplace(coref.find(a), *kept);
}

void GenContext::apply_action(const ChooserAction& action) {
  switch (action.kind) {
    case ChooserAction::Kind::Identify: {
      auto concept_id = resolve_designator(action.b);
      if (!concept_id)
        throw GenerationError("identify(" + action.a + ", " + action.b +
                              "): designator does not resolve");
      bind(action.a, *concept_id);
      return;
    }
    case ChooserAction::Kind::Copyhub:
      conflate(action.a, action.b);
      return;
    case ChooserAction::Kind::Choose:
    case ChooserAction::Kind::OutOfBounds:
      throw GenerationError("cannot apply choose/outOfBounds as a context action");
  }
}

namespace {

void sync_conflations(GenContext& ctx) {
  for (const auto& [a, b] : ctx.accumulated.conflations) ctx.conflate(a, b);
}

}  // namespace

void traverse(const TypeLattice& g, const SemanticOracle& oracle, GenContext& ctx) {
  ctx.selected.insert(g.root);
  ctx.accumulated =
      unify_constraints(ctx.accumulated, g.constraints_of(g.root), g);
  sync_conflations(ctx);

  std::set<std::string> fired(ctx.fired.begin(), ctx.fired.end());
  for (;;) {
    const System* next = nullptr;
    for (const auto& s : g.systems)
      if (!fired.count(s.name) && entry_satisfied(s.entry, ctx.selected)) {
        next = &s;
        break;
      }
    if (!next) return;
    fired.insert(next->name);

    const Chooser* chooser = g.chooser_of(*next);
    if (!chooser)
      throw GenerationError("system '" + next->name +
                            "' became active but has no chooser");
    ChooserOutcome outcome = evaluate_chooser(*chooser, oracle, ctx);
    if (std::find(next->outputs.begin(), next->outputs.end(), outcome.chosen) ==
        next->outputs.end())
      throw GenerationError("chooser '" + chooser->name + "' chose '" +
                            outcome.chosen + "', not an output of system '" +
                            next->name + "'");

    ctx.selected.insert(outcome.chosen);
    ctx.accumulated = unify_constraints(
        ctx.accumulated, g.constraints_of(outcome.chosen), g);
    sync_conflations(ctx);
    for (const auto& a : outcome.actions) ctx.apply_action(a);
    ctx.fired.push_back(next->name);
    ctx.inquiries.insert(ctx.inquiries.end(), outcome.trace.begin(),
                         outcome.trace.end());
  }
}

namespace {

struct Collector {
  Realization* realization = nullptr;
  TypeSet* fillers = nullptr;
  std::set<std::string>* items = nullptr;
  TypeSet word_classes;
  std::vector<std::string> concept_stack;
};

const std::string* pick_spelling(const LexicalItem& item, const TypeSet& fillers) {
  for (const auto& [form, text] : item.spellings)
    if (fillers.count(form)) return &text;
  return item.spelling_for("base");
}

std::string resolve_item_spelling(const Lexicon& lexicon, const std::string& item_id,
                                  const TypeSet& fillers, const std::string& label,
                                  Collector& col, Constituent& c) {
  const LexicalItem* item = lexicon.find(item_id);
  if (!item)
    throw LexiconMissError("lexical item '" + item_id + "' (function '" + label +
                               "') not in lexicon",
                           item_id);
  const std::string* text = pick_spelling(*item, fillers);
  if (!text)
    throw LexiconMissError("item '" + item_id + "' has no spelling for function '" +
                               label + "'",
                           item_id);
  c.lex_item = item_id;
  if (col.items) col.items->insert(item_id);
  return *text;
}

FeatureStructure realize(const TypeLattice& g, const Lexicon& lexicon,
                         const SemanticSpec& spec, const std::string& concept_id,
                         Collector& col);

void realize_class(const TypeLattice& g, const Lexicon& lexicon,
                   const SemanticSpec& spec, Collector& col,
                   const ConstraintSet::Lexification* lexify, Constituent& c) {
  const std::string& label = c.labels.front();
  if (lexify) {
    if (lexify->literal) {
      c.spelling = lexify->value;
    } else {
      c.spelling = resolve_item_spelling(lexicon, lexify->value, c.filler_types,
                                         label, col, c);
    }
    return;
  }
  if (!c.concept_id) return;  // silent constituent

  bool lexical = false;
  for (const auto& t : c.filler_types)
    if (col.word_classes.count(t)) {
      lexical = true;
      break;
    }
  if (lexical) {
    const std::string* item_id = spec.attr(*c.concept_id, "lex");
    if (!item_id)
      throw LexiconMissError("concept '" + *c.concept_id + "' (function '" + label +
                                 "') carries no lexical item",
                             *c.concept_id);
    c.spelling = resolve_item_spelling(lexicon, *item_id, c.filler_types, label,
                                       col, c);
    return;
  }
  try {
    c.child.push_back(realize(g, lexicon, spec, *c.concept_id, col));
  } catch (GenerationError& e) {
    e.constituent_path.insert(e.constituent_path.begin(), label);
    throw;
  }
}

FeatureStructure realize(const TypeLattice& g, const Lexicon& lexicon,
                         const SemanticSpec& spec, const std::string& concept_id,
                         Collector& col) {
  if (std::find(col.concept_stack.begin(), col.concept_stack.end(), concept_id) !=
      col.concept_stack.end())
    throw GenerationError("concept '" + concept_id +
                          "' recursively contains itself");
  col.concept_stack.push_back(concept_id);

  GenContext ctx;
  ctx.lattice = &g;
  ctx.spec = &spec;
  ctx.self_concept = concept_id;
  TableOracle oracle(spec);
  traverse(g, oracle, ctx);

  if (col.realization) {
    col.realization->steps += static_cast<int>(ctx.fired.size());
    col.realization->queries += static_cast<int>(ctx.inquiries.size());
    col.realization->used_types.insert(ctx.selected.begin(), ctx.selected.end());
    for (const auto& [q, a] : ctx.inquiries)
      col.realization->inquiry_log[q.name].insert(a);
  }

  // Group inserted functions into coreference classes, first-insertion order.
  std::vector<Constituent> classes;
  std::map<std::string, size_t> pos;  // representative -> class index
  for (const auto& [label, filler] : ctx.accumulated.insertions) {
    const std::string& rep = ctx.coref.find(label);
    auto [it, fresh] = pos.emplace(rep, classes.size());
    if (fresh) classes.emplace_back();
    Constituent& c = classes[it->second];
    c.labels.push_back(label);
    c.filler_types.insert(filler.begin(), filler.end());
  }

  // Conflation may have united fillers from sibling types; reject that here
  // just as unify_constraints does for a single label.
  for (const auto& c : classes) {
    std::map<std::string, std::string> by_system;
    for (const auto& f : c.filler_types) {
      const System* intro = g.introducing_system(f);
      if (!intro) continue;
      auto [it, fresh] = by_system.emplace(intro->name, f);
      if (!fresh && it->second != f)
        throw UnificationError("constituent '" + c.labels.front() +
                                   "' requires sibling fillers '" + it->second +
                                   "' and '" + f + "'",
                               c.labels.front());
    }
    if (col.fillers) col.fillers->insert(c.filler_types.begin(), c.filler_types.end());
  }

  // One lexification per class.
  std::map<size_t, const ConstraintSet::Lexification*> lexified;
  for (const auto& l : ctx.accumulated.lexifications) {
    auto it = pos.find(ctx.coref.find(l.label));
    if (it == pos.end())
      throw GenerationError("lexify targets uninserted function '" + l.label + "'");
    auto [prev, fresh] = lexified.emplace(it->second, &l);
    if (!fresh && !(prev->second->literal == l.literal && prev->second->value == l.value))
      throw UnificationError("constituent '" + classes[it->second].labels.front() +
                                 "' lexified two different ways",
                             l.label);
  }

  for (size_t i = 0; i < classes.size(); ++i) {
    const std::string& rep = ctx.coref.find(classes[i].labels.front());
    if (auto b = ctx.bindings.find(rep); b != ctx.bindings.end())
      classes[i].concept_id = b->second;
  }

  for (size_t i = 0; i < classes.size(); ++i) {
    auto it = lexified.find(i);
    realize_class(g, lexicon, spec, col, it == lexified.end() ? nullptr : it->second,
                  classes[i]);
  }

  // Linearize: orderings project onto classes; stable topological sort with
  // first-insertion tie-break.
  size_t n = classes.size();
  std::vector<std::set<size_t>> succ(n);
  std::vector<int> indeg(n, 0);
  for (const auto& [before, after] : ctx.accumulated.orderings) {
    auto ib = pos.find(ctx.coref.find(before));
    auto ia = pos.find(ctx.coref.find(after));
    if (ib == pos.end() || ia == pos.end())
      throw GenerationError("ordering over uninserted function ('" + before +
                            "' before '" + after + "')");
    if (ib->second == ia->second)
      throw OrderCycleError("'" + before + "' ordered against conflated '" + after +
                            "'");
    if (succ[ib->second].insert(ia->second).second) ++indeg[ia->second];
  }
  std::vector<size_t> order;
  std::set<size_t> ready;
  for (size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.insert(i);
  while (!ready.empty()) {
    size_t i = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(i);
    for (size_t j : succ[i])
      if (--indeg[j] == 0) ready.insert(j);
  }
  if (order.size() != n) {
    std::string cyclic;
    for (size_t i = 0; i < n; ++i)
      if (indeg[i] > 0) cyclic += (cyclic.empty() ? "" : ", ") + classes[i].labels.front();
    throw OrderCycleError("ordering constraints form a cycle over: " + cyclic);
  }

  FeatureStructure fs;
  fs.constituents.reserve(n);
  for (size_t i : order) fs.constituents.push_back(std::move(classes[i]));
  col.concept_stack.pop_back();
  return fs;
}

}  // namespace

FeatureStructure generate_constituent(const TypeLattice& g, const Lexicon& lexicon,
                                      const SemanticSpec& spec,
                                      const std::string& concept_id) {
  Collector col;
  col.word_classes = g.word_class_types();
  return realize(g, lexicon, spec, concept_id, col);
}

std::vector<std::string> structure_tokens(const FeatureStructure& fs) {
  std::vector<std::string> tokens;
  for (const auto& c : fs.constituents) {
    if (c.spelling) {
      tokens.push_back(*c.spelling);
    } else if (!c.child.empty()) {
      auto sub = structure_tokens(c.child.front());
      tokens.insert(tokens.end(), sub.begin(), sub.end());
    }
  }
  return tokens;
}

SentenceRun generate_sentence_run(const TypeLattice& g, const Lexicon& lexicon,
                                  const SemanticSpec& spec) {
  SentenceRun run;
  Collector col;
  col.realization = &run.realization;
  col.fillers = &run.used_fillers;
  col.items = &run.used_items;
  col.word_classes = g.word_class_types();
  run.structure = realize(g, lexicon, spec, spec.root, col);

  std::string text;
  for (const auto& token : structure_tokens(run.structure)) {
    if (!text.empty()) text += ' ';
    text += token;
  }
  if (!text.empty()) {
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (text.back() != '.') text += '.';
  }
  run.realization.text = std::move(text);
  return run;
}

Realization generate_sentence(const TypeLattice& g, const Lexicon& lexicon,
                              const SemanticSpec& spec) {
  return generate_sentence_run(g, lexicon, spec).realization;
}

}  // namespace sfg
