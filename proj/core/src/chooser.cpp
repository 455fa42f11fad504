#include "sfg/chooser.hpp"

#include <algorithm>

#include "sfg/errors.hpp"
#include "sfg/generator.hpp"

namespace sfg {

ChooserAction ChooserAction::choose(std::string type) {
  return {Kind::Choose, std::move(type), ""};
}
ChooserAction ChooserAction::identify(std::string label, std::string concept_ref) {
  return {Kind::Identify, std::move(label), std::move(concept_ref)};
}
ChooserAction ChooserAction::copyhub(std::string to, std::string from) {
  return {Kind::Copyhub, std::move(to), std::move(from)};
}
ChooserAction ChooserAction::out_of_bounds(std::string reason) {
  return {Kind::OutOfBounds, std::move(reason), ""};
}

ChooserNode ChooserNode::ask(
    InquiryRef q, std::vector<std::pair<std::string, ChooserNode>> branches) {
  ChooserNode n;
  n.kind = Kind::Ask;
  n.query = std::move(q);
  n.branches = std::move(branches);
  return n;
}

ChooserNode ChooserNode::act(std::vector<ChooserAction> actions) {
  ChooserNode n;
  n.kind = Kind::Actions;
  n.actions = std::move(actions);
  return n;
}

ChooserNode ChooserNode::act_then(std::vector<ChooserAction> actions,
                                  ChooserNode next) {
  ChooserNode n = act(std::move(actions));
  n.then.push_back(std::move(next));
  return n;
}

ChooserOutcome evaluate_chooser(const Chooser& chooser, const SemanticOracle& oracle,
                                const GenContext& ctx) {
  GenContext scratch = ctx;  // identify/copyhub are visible to later inquiries
  ChooserOutcome out;
  const ChooserNode* node = &chooser.root;
  while (node) {
    if (node->kind == ChooserNode::Kind::Ask) {
      std::vector<std::string> concepts;
      concepts.reserve(node->query.args.size());
      for (const auto& arg : node->query.args) {
        auto concept_id = scratch.resolve_designator(arg);
        if (!concept_id)
          throw MissingAnswerError("inquiry '" + node->query.name + "' of chooser '" +
                                       chooser.name + "': argument '" + arg +
                                       "' does not resolve",
                                   node->query.name);
        concepts.push_back(*concept_id);
      }
      auto answer = oracle.answer(node->query.name, concepts);
      if (!answer)
        throw MissingAnswerError("no answer for inquiry '" + node->query.name +
                                     "' in chooser '" + chooser.name + "'",
                                 node->query.name);
      out.trace.emplace_back(node->query, *answer);
      const ChooserNode* next = nullptr;
      for (const auto& [label, sub] : node->branches)
        if (label == *answer) {
          next = &sub;
          break;
        }
      if (!next)
        throw NoBranchError("chooser '" + chooser.name + "' has no branch for '" +
                                *answer + "' of inquiry '" + node->query.name + "'",
                            node->query.name, *answer);
      node = next;
      continue;
    }
    for (const auto& action : node->actions) {
      switch (action.kind) {
        case ChooserAction::Kind::Choose:
          if (!out.chosen.empty())
            throw GenerationError("chooser '" + chooser.name +
                                  "' chose twice on one path");
          out.chosen = action.a;
          break;
        case ChooserAction::Kind::OutOfBounds:
          throw OutOfBoundsError("chooser '" + chooser.name +
                                 "' reached an out-of-bounds path: " + action.a);
        case ChooserAction::Kind::Identify:
        case ChooserAction::Kind::Copyhub:
          out.actions.push_back(action);
          scratch.apply_action(action);
          break;
      }
    }
    node = node->then.empty() ? nullptr : &node->then.front();
  }
  if (out.chosen.empty())
    throw NoChoiceError("chooser '" + chooser.name +
                        "' completed without choosing a type");
  return out;
}

Chooser extend_chooser(const Chooser& base, const std::vector<ChooserAction>& actions) {
  if (actions.empty()) return base;
  for (const auto& a : actions)
    if (a.kind == ChooserAction::Kind::Choose)
      throw ChoosePercolatedError("percolated actions for chooser '" + base.name +
                                  "' contain choose('" + a.a + "')");
  Chooser out;
  out.name = base.name;
  out.root = ChooserNode::act_then(actions, base.root);
  return out;
}

FlattenResult flatten_unconditional_prefix(const ChooserNode& root) {
  FlattenResult out;
  const ChooserNode* node = &root;
  while (node) {
    if (node->kind == ChooserNode::Kind::Ask) {
      out.saw_ask = true;
      return out;
    }
    for (const auto& action : node->actions) {
      if (action.kind == ChooserAction::Kind::Identify ||
          action.kind == ChooserAction::Kind::Copyhub)
        out.actions.push_back(action);
      else
        out.saw_skipped = true;  // choose was consumed by the collapse
    }
    node = node->then.empty() ? nullptr : &node->then.front();
  }
  return out;
}

namespace {

ChooserNode mark_node(const ChooserNode& node, const TypeSet& surviving) {
  ChooserNode out = node;
  if (out.kind == ChooserNode::Kind::Ask) {
    for (auto& [answer, sub] : out.branches) sub = mark_node(sub, surviving);
    return out;
  }
  for (auto& action : out.actions)
    if (action.kind == ChooserAction::Kind::Choose && !surviving.count(action.a))
      action = ChooserAction::out_of_bounds("type '" + action.a +
                                            "' is outside the subgrammar");
  if (!out.then.empty()) out.then.front() = mark_node(out.then.front(), surviving);
  return out;
}

ChooserNode prune_node(const ChooserNode& node, const ResponseLog& observed,
                       const TypeSet& surviving) {
  if (node.kind == ChooserNode::Kind::Actions) {
    ChooserNode out;
    out.kind = ChooserNode::Kind::Actions;
    out.actions = node.actions;
    for (auto& action : out.actions)
      if (action.kind == ChooserAction::Kind::Choose && !surviving.count(action.a))
        action = ChooserAction::out_of_bounds("type '" + action.a +
                                              "' is outside the subgrammar");
    if (!node.then.empty())
      out.then.push_back(prune_node(node.then.front(), observed, surviving));
    return out;
  }
  auto seen = observed.find(node.query.name);
  std::vector<std::pair<std::string, ChooserNode>> branches;
  std::vector<size_t> live;
  for (const auto& [answer, sub] : node.branches) {
    if (seen != observed.end() && seen->second.count(answer)) {
      live.push_back(branches.size());
      branches.emplace_back(answer, prune_node(sub, observed, surviving));
    } else {
      branches.emplace_back(
          answer, ChooserNode::act({ChooserAction::out_of_bounds(
                      "answer '" + answer + "' to '" + node.query.name +
                      "' never occurred in training")}));
    }
  }
  if (live.size() == 1) return branches[live.front()].second;  // query elided
  ChooserNode out;
  out.kind = ChooserNode::Kind::Ask;
  out.query = node.query;
  out.branches = std::move(branches);
  return out;
}

}  // namespace

Chooser mark_out_of_bounds(const Chooser& chooser, const TypeSet& surviving) {
  Chooser out;
  out.name = chooser.name;
  out.root = mark_node(chooser.root, surviving);
  return out;
}

Chooser prune_chooser_by_responses(const Chooser& chooser, const ResponseLog& observed,
                                   const TypeSet& surviving) {
  Chooser out;
  out.name = chooser.name;
  out.root = prune_node(chooser.root, observed, surviving);
  return out;
}

}  // namespace sfg
