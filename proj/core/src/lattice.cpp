#include "sfg/lattice.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "sfg/errors.hpp"

namespace sfg {

namespace {

std::pair<std::string, std::string> norm_pair(const std::string& a,
                                              const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

template <typename T>
std::multiset<T> as_multiset(const std::vector<T>& v) {
  return std::multiset<T>(v.begin(), v.end());
}

}  // namespace

bool ConstraintSet::same_content(const ConstraintSet& o) const {
  auto pairs = [](const std::vector<std::pair<std::string, std::string>>& v,
                  bool unordered) {
    std::multiset<std::pair<std::string, std::string>> s;
    for (const auto& [a, b] : v) s.insert(unordered ? norm_pair(a, b) : std::make_pair(a, b));
    return s;
  };
  auto lex = [](const std::vector<Lexification>& v) {
    std::multiset<std::tuple<std::string, bool, std::string>> s;
    for (const auto& l : v) s.insert({l.label, l.literal, l.value});
    return s;
  };
  return as_multiset(insertions) == as_multiset(o.insertions) &&
         pairs(conflations, true) == pairs(o.conflations, true) &&
         pairs(orderings, false) == pairs(o.orderings, false) &&
         lex(lexifications) == lex(o.lexifications);
}

void TypeLattice::rebuild_indexes() {
  type_index_.clear();
  system_index_.clear();
  intro_index_.clear();
  for (size_t i = 0; i < types.size(); ++i)
    type_index_.emplace(types[i], static_cast<int>(i));
  for (size_t i = 0; i < systems.size(); ++i) {
    system_index_.emplace(systems[i].name, static_cast<int>(i));
    for (const auto& o : systems[i].outputs)
      intro_index_.emplace(o, static_cast<int>(i));
  }
}

int TypeLattice::type_order(const std::string& t) const {
  auto it = type_index_.find(t);
  return it == type_index_.end() ? -1 : it->second;
}

const System* TypeLattice::system(const std::string& name) const {
  auto it = system_index_.find(name);
  return it == system_index_.end() ? nullptr : &systems[it->second];
}

const System* TypeLattice::introducing_system(const std::string& t) const {
  auto it = intro_index_.find(t);
  return it == intro_index_.end() ? nullptr : &systems[it->second];
}

const ConstraintSet& TypeLattice::constraints_of(const std::string& t) const {
  static const ConstraintSet kEmpty;
  auto it = constraints.find(t);
  return it == constraints.end() ? kEmpty : it->second;
}

const Chooser* TypeLattice::chooser_of(const System& s) const {
  if (s.chooser.empty()) return nullptr;
  auto it = choosers.find(s.chooser);
  return it == choosers.end() ? nullptr : &it->second;
}

const System* TypeLattice::root_system() const {
  for (const auto& s : systems)
    if (is_single_atom_dnf(s.entry) && single_atom(s.entry) == root) return &s;
  return nullptr;
}

TypeSet TypeLattice::word_class_types() const {
  TypeSet out;
  if (!has_type(word_root)) return out;
  std::deque<std::string> work{word_root};
  out.insert(word_root);
  while (!work.empty()) {
    std::string t = work.front();
    work.pop_front();
    for (const auto& s : systems) {
      // A system hangs below `t` when its entry can only be reached via
      // word-class types; atom membership is the workable approximation for
      // the tree-shaped word region.
      if (!entry_mentions(s.entry, t)) continue;
      for (const auto& o : s.outputs)
        if (out.insert(o).second) work.push_back(o);
    }
  }
  return out;
}

namespace {

void check_chooser_paths(const std::string& name, const ChooserNode& node,
                         int chooses_so_far, bool extracted,
                         std::vector<ValidationIssue>& issues) {
  if (node.kind == ChooserNode::Kind::Ask) {
    if (node.branches.empty())
      issues.push_back({"empty-ask", name, "inquiry '" + node.query.name +
                                               "' has no branches"});
    std::set<std::string> seen;
    for (const auto& [answer, sub] : node.branches) {
      if (!seen.insert(answer).second)
        issues.push_back({"duplicate-branch", name,
                          "answer '" + answer + "' listed twice under '" +
                              node.query.name + "'"});
      check_chooser_paths(name, sub, chooses_so_far, extracted, issues);
    }
    return;
  }
  int chooses = chooses_so_far;
  for (const auto& a : node.actions)
    if (a.kind == ChooserAction::Kind::Choose) ++chooses;
  if (chooses > 1)
    issues.push_back({"multiple-choose", name, "a path chooses more than once"});
  if (!node.then.empty()) {
    check_chooser_paths(name, node.then.front(), chooses, extracted, issues);
    return;
  }
  if (chooses == 0 && !extracted)
    issues.push_back({"no-choose", name, "a path ends without choosing"});
}

}  // namespace

ValidationReport validate_lattice(const TypeLattice& g, LatticeMode mode) {
  ValidationReport report;
  auto& issues = report.issues;
  const bool extracted = mode == LatticeMode::Extracted;

  std::set<std::string> types(g.types.begin(), g.types.end());
  if (g.types.size() != types.size())
    issues.push_back({"duplicate-type", "", "type list contains duplicates"});
  if (!types.count(g.root))
    issues.push_back({"missing-root", g.root, "root type not in type list"});
  else if (!g.types.empty() && g.types.front() != g.root)
    issues.push_back({"root-not-first", g.root, "root must head the type list"});

  // Every non-root type introduced by exactly one system.
  std::map<std::string, int> introduced;
  std::set<std::string> sys_names;
  for (const auto& s : g.systems) {
    if (!sys_names.insert(s.name).second)
      issues.push_back({"duplicate-system", s.name, "system name reused"});
    if (s.outputs.empty())
      issues.push_back({"no-outputs", s.name, "system has no outputs"});
    if (!extracted && s.outputs.size() < 2)
      issues.push_back({"single-output", s.name,
                        "authored systems need at least two outputs"});
    std::set<std::string> outs;
    for (const auto& o : s.outputs) {
      if (!outs.insert(o).second)
        issues.push_back({"duplicate-output", s.name, "output '" + o + "' repeated"});
      ++introduced[o];
      if (!types.count(o))
        issues.push_back({"unknown-output", s.name, "output '" + o + "' undeclared"});
      if (o == g.root)
        issues.push_back({"root-introduced", s.name, "root cannot be an output"});
    }
    if (is_empty_dnf(s.entry)) {
      issues.push_back({"empty-entry", s.name, "entry has no satisfiable form"});
    } else if (!is_dnf(s.entry)) {
      issues.push_back({"entry-not-normalized", s.name,
                        "entry must be stored in or-of-ands form"});
    } else {
      for (const auto& atom : entry_atoms(s.entry))
        if (!types.count(atom))
          issues.push_back({"unknown-entry-type", s.name,
                            "entry mentions undeclared '" + atom + "'"});
    }
    if (!s.chooser.empty() && !g.choosers.count(s.chooser))
      issues.push_back({"unknown-chooser", s.name,
                        "chooser '" + s.chooser + "' not defined"});
  }
  for (const auto& t : g.types) {
    if (t == g.root) continue;
    auto it = introduced.find(t);
    if (it == introduced.end())
      issues.push_back({"dangling-type", t, "type is introduced by no system"});
    else if (it->second > 1)
      issues.push_back({"multi-introduced", t,
                        "type is an output of several systems"});
  }

  // Exactly one system may sit directly on the root.
  int root_systems = 0;
  for (const auto& s : g.systems)
    if (is_single_atom_dnf(s.entry) && single_atom(s.entry) == g.root)
      ++root_systems;
  if (root_systems > 1)
    issues.push_back({"multiple-root-systems", g.root,
                      "several systems have the bare root entry"});
  if (root_systems == 0 && !g.systems.empty() && !extracted)
    issues.push_back({"no-root-system", g.root,
                      "no system has the bare root entry"});

  // Chooser outputs must be legal; every referenced chooser must exist
  // (checked above), and each choose(t) must target an output of some system
  // referencing that chooser.
  for (const auto& [name, chooser] : g.choosers) {
    check_chooser_paths(name, chooser.root, 0, extracted, issues);
    std::set<std::string> legal;
    for (const auto& s : g.systems)
      if (s.chooser == name)
        legal.insert(s.outputs.begin(), s.outputs.end());
    std::function<void(const ChooserNode&)> walk = [&](const ChooserNode& n) {
      for (const auto& a : n.actions)
        if (a.kind == ChooserAction::Kind::Choose && !legal.count(a.a) &&
            !legal.empty())
          issues.push_back({"choose-not-output", name,
                            "chooses '" + a.a + "' which no owning system offers"});
      for (const auto& [ans, sub] : n.branches) walk(sub);
      if (!n.then.empty()) walk(n.then.front());
    };
    walk(chooser.root);
  }

  // Constraint references: every constrained type declared and every filler
  // type declared. Function labels in conflations/orderings/lexifications
  // may be inserted by a different type on the same path, so cross-label
  // consistency is only checkable on the accumulated set at generation time.
  for (const auto& [t, cs] : g.constraints) {
    if (!types.count(t)) {
      issues.push_back({"constraint-unknown-type", t,
                        "constraints attached to undeclared type"});
      continue;
    }
    std::set<std::string> labels;
    for (const auto& [label, filler] : cs.insertions) {
      if (!labels.insert(label).second)
        issues.push_back({"duplicate-insertion", t,
                          "label '" + label + "' inserted twice"});
      for (const auto& f : filler)
        if (!types.count(f))
          issues.push_back({"unknown-filler", t,
                            "filler '" + f + "' of '" + label + "' undeclared"});
    }
    for (const auto& [a, b] : cs.conflations)
      if (a == b)
        issues.push_back({"self-conflation", t, "label conflated with itself"});
  }

  if (!types.count(g.word_root))
    issues.push_back({"missing-word-root", g.word_root,
                      "word-class root not in type list"});
  return report;
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& i : issues) {
    out += "[" + i.code + "] " + (i.where.empty() ? "<grammar>" : i.where) +
           ": " + i.detail + "\n";
  }
  return out;
}

std::vector<const System*> who_has_in_entry(const TypeLattice& g,
                                            const std::string& type) {
  std::vector<const System*> out;
  for (const auto& s : g.systems)
    if (entry_mentions(s.entry, type)) out.push_back(&s);
  return out;
}

ConstraintSet unify_constraints(const ConstraintSet& a, const ConstraintSet& b,
                                const TypeLattice& g) {
  ConstraintSet out = a;
  for (const auto& [label, filler] : b.insertions) {
    bool merged = false;
    for (auto& [l, f] : out.insertions)
      if (l == label) {
        f.insert(filler.begin(), filler.end());
        merged = true;
        break;
      }
    if (!merged) out.insertions.emplace_back(label, filler);
  }
  // Sibling fillers (two outputs of one system) can never both hold.
  for (const auto& [label, filler] : out.insertions) {
    std::map<std::string, std::string> by_system;
    for (const auto& f : filler) {
      const System* intro = g.introducing_system(f);
      if (!intro) continue;
      auto [it, fresh] = by_system.emplace(intro->name, f);
      if (!fresh && it->second != f)
        throw UnificationError("function '" + label + "' requires sibling types '" +
                                   it->second + "' and '" + f + "' of system '" +
                                   intro->name + "'",
                               label);
    }
  }
  for (const auto& [x, y] : b.conflations) {
    auto key = norm_pair(x, y);
    bool seen = false;
    for (const auto& [p, q] : out.conflations)
      if (norm_pair(p, q) == key) {
        seen = true;
        break;
      }
    if (!seen) out.conflations.emplace_back(x, y);
  }
  for (const auto& [x, y] : b.orderings) {
    if (std::find(out.orderings.begin(), out.orderings.end(),
                  std::make_pair(x, y)) == out.orderings.end())
      out.orderings.emplace_back(x, y);
  }
  for (const auto& l : b.lexifications) {
    const auto* prior = out.lexification_for(l.label);
    if (prior) {
      if (prior->literal != l.literal || prior->value != l.value)
        throw UnificationError("function '" + l.label +
                                   "' lexified two different ways ('" +
                                   prior->value + "' vs '" + l.value + "')",
                               l.label);
      continue;
    }
    out.lexifications.push_back(l);
  }
  return out;
}

}  // namespace sfg
