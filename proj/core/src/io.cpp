#include "sfg/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "sfg/errors.hpp"

namespace sfg {

namespace {

using ojson = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

std::pair<int, int> line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ojson parse_json(const std::string& text, const std::string& origin) {
  try {
    return ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    auto [line, col] = line_col(text, e.byte ? e.byte - 1 : 0);
    throw ParseError(origin + ": " + e.what(), line, col);
  }
}

[[noreturn]] void bad(const std::string& origin, const std::string& msg) {
  throw ParseError(origin + ": " + msg);
}

std::string as_string(const ojson& j, const std::string& origin,
                      const std::string& what) {
  if (!j.is_string()) bad(origin, what + " must be a string");
  return j.get<std::string>();
}

// ---- entry expressions ----------------------------------------------------

ojson entry_to_json(const EntryExpr& e) {
  // Entries are stored canonically (or-of-ands); emit the compact form.
  auto conjunct = [](const EntryExpr& c) -> ojson {
    if (c.kids.size() == 1) return c.kids.front().atom;
    ojson atoms = ojson::array();
    for (const auto& a : c.kids) atoms.push_back(a.atom);
    return ojson{{"and", atoms}};
  };
  if (is_single_atom_dnf(e)) return single_atom(e);
  if (e.kind == EntryExpr::Kind::Or && e.kids.size() == 1)
    return conjunct(e.kids.front());
  ojson alts = ojson::array();
  for (const auto& c : e.kids) alts.push_back(conjunct(c));
  return ojson{{"or", alts}};
}

EntryExpr entry_from_json(const ojson& j, const std::string& origin) {
  if (j.is_string()) return EntryExpr::make_atom(j.get<std::string>());
  if (j.is_object() && j.size() == 1) {
    const auto& [key, val] = *j.items().begin();
    if ((key == "and" || key == "or") && val.is_array()) {
      std::vector<EntryExpr> kids;
      for (const auto& k : val) kids.push_back(entry_from_json(k, origin));
      return key == "and" ? EntryExpr::make_and(std::move(kids))
                          : EntryExpr::make_or(std::move(kids));
    }
  }
  bad(origin, "entry must be a type name or {\"and\"|\"or\": [...]}");
}

// ---- chooser trees --------------------------------------------------------

ojson action_to_json(const ChooserAction& a) {
  switch (a.kind) {
    case ChooserAction::Kind::Choose:
      return ojson{{"choose", a.a}};
    case ChooserAction::Kind::Identify:
      return ojson{{"identify", ojson::array({a.a, a.b})}};
    case ChooserAction::Kind::Copyhub:
      return ojson{{"copyhub", ojson::array({a.a, a.b})}};
    case ChooserAction::Kind::OutOfBounds:
      return ojson{{"outOfBounds", a.a}};
  }
  return {};
}

ChooserAction action_from_json(const ojson& j, const std::string& origin) {
  if (!j.is_object() || j.size() != 1)
    bad(origin, "each action must be a single-key object");
  const auto& [key, val] = *j.items().begin();
  if (key == "choose") return ChooserAction::choose(as_string(val, origin, "choose"));
  if (key == "outOfBounds")
    return ChooserAction::out_of_bounds(as_string(val, origin, "outOfBounds"));
  if (key == "identify" || key == "copyhub") {
    if (!val.is_array() || val.size() != 2)
      bad(origin, "'" + key + "' takes [a, b]");
    std::string a = as_string(val[0], origin, key);
    std::string b = as_string(val[1], origin, key);
    return key == "identify" ? ChooserAction::identify(a, b)
                             : ChooserAction::copyhub(a, b);
  }
  bad(origin, "unknown action '" + key + "'");
}

ojson node_to_json(const ChooserNode& n) {
  if (n.kind == ChooserNode::Kind::Ask) {
    ojson branches = ojson::object();
    for (const auto& [answer, sub] : n.branches)
      branches[answer] = node_to_json(sub);
    ojson out = ojson::object();
    out["ask"] = n.query.name;
    out["args"] = n.query.args;
    out["branches"] = branches;
    return out;
  }
  ojson actions = ojson::array();
  for (const auto& a : n.actions) actions.push_back(action_to_json(a));
  ojson out = ojson::object();
  out["do"] = actions;
  if (!n.then.empty()) out["then"] = node_to_json(n.then.front());
  return out;
}

ChooserNode node_from_json(const ojson& j, const std::string& origin) {
  if (!j.is_object()) bad(origin, "chooser node must be an object");
  if (j.contains("ask")) {
    ChooserNode n;
    n.kind = ChooserNode::Kind::Ask;
    n.query.name = as_string(j.at("ask"), origin, "ask");
    if (j.contains("args")) {
      if (!j.at("args").is_array()) bad(origin, "'args' must be an array");
      for (const auto& a : j.at("args"))
        n.query.args.push_back(as_string(a, origin, "inquiry argument"));
    }
    if (!j.contains("branches") || !j.at("branches").is_object())
      bad(origin, "'ask' node needs a 'branches' object");
    for (const auto& [answer, sub] : j.at("branches").items())
      n.branches.emplace_back(answer, node_from_json(sub, origin));
    return n;
  }
  if (j.contains("do")) {
    ChooserNode n;
    n.kind = ChooserNode::Kind::Actions;
    if (!j.at("do").is_array()) bad(origin, "'do' must be an array");
    for (const auto& a : j.at("do"))
      n.actions.push_back(action_from_json(a, origin));
    if (j.contains("then"))
      n.then.push_back(node_from_json(j.at("then"), origin));
    return n;
  }
  bad(origin, "chooser node needs 'ask' or 'do'");
}

// ---- constraints ----------------------------------------------------------

ojson constraints_to_json(const ConstraintSet& cs) {
  ojson out = ojson::object();
  if (!cs.insertions.empty()) {
    ojson ins = ojson::object();
    for (const auto& [label, filler] : cs.insertions)
      ins[label] = std::vector<std::string>(filler.begin(), filler.end());
    out["insert"] = ins;
  }
  if (!cs.conflations.empty()) {
    ojson arr = ojson::array();
    for (const auto& [a, b] : cs.conflations)
      arr.push_back(ojson::array({a, b}));
    out["conflate"] = arr;
  }
  if (!cs.orderings.empty()) {
    ojson arr = ojson::array();
    for (const auto& [a, b] : cs.orderings) arr.push_back(ojson::array({a, b}));
    out["order"] = arr;
  }
  if (!cs.lexifications.empty()) {
    ojson lex = ojson::object();
    for (const auto& l : cs.lexifications)
      lex[l.label] = ojson{{l.literal ? "text" : "item", l.value}};
    out["lexify"] = lex;
  }
  return out;
}

ConstraintSet constraints_from_json(const ojson& j, const std::string& origin) {
  ConstraintSet cs;
  if (!j.is_object()) bad(origin, "constraints must be an object");
  if (j.contains("insert")) {
    if (!j.at("insert").is_object()) bad(origin, "'insert' must be an object");
    for (const auto& [label, filler] : j.at("insert").items()) {
      if (!filler.is_array()) bad(origin, "filler of '" + label + "' must be an array");
      FillerSpec spec;
      for (const auto& f : filler)
        spec.insert(as_string(f, origin, "filler type"));
      cs.insertions.emplace_back(label, std::move(spec));
    }
  }
  auto pairs = [&](const char* key,
                   std::vector<std::pair<std::string, std::string>>& into) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_array()) bad(origin, std::string("'") + key + "' must be an array");
    for (const auto& p : j.at(key)) {
      if (!p.is_array() || p.size() != 2)
        bad(origin, std::string("'") + key + "' entries must be [a, b]");
      into.emplace_back(as_string(p[0], origin, key), as_string(p[1], origin, key));
    }
  };
  pairs("conflate", cs.conflations);
  pairs("order", cs.orderings);
  if (j.contains("lexify")) {
    if (!j.at("lexify").is_object()) bad(origin, "'lexify' must be an object");
    for (const auto& [label, spec] : j.at("lexify").items()) {
      if (!spec.is_object() || spec.size() != 1 ||
          (!spec.contains("item") && !spec.contains("text")))
        bad(origin, "lexify of '" + label + "' needs {\"item\": id} or {\"text\": s}");
      ConstraintSet::Lexification l;
      l.label = label;
      l.literal = spec.contains("text");
      l.value = as_string(l.literal ? spec.at("text") : spec.at("item"), origin,
                          "lexify value");
      cs.lexifications.push_back(std::move(l));
    }
  }
  return cs;
}

}  // namespace

// ---- grammar documents ----------------------------------------------------

std::string grammar_to_text(const TypeLattice& g, const Lexicon& lexicon) {
  ojson doc = ojson::object();
  doc["formatVersion"] = 1;
  doc["root"] = g.root;
  doc["wordRoot"] = g.word_root;
  doc["extracted"] = g.extracted;
  doc["types"] = g.types;

  ojson systems = ojson::array();
  for (const auto& s : g.systems) {
    ojson sj = ojson::object();
    sj["name"] = s.name;
    sj["entry"] = entry_to_json(s.entry);
    sj["outputs"] = s.outputs;
    if (!s.chooser.empty()) sj["chooser"] = s.chooser;
    systems.push_back(std::move(sj));
  }
  doc["systems"] = systems;

  ojson constraints = ojson::object();
  for (const auto& t : g.types) {
    auto it = g.constraints.find(t);
    if (it != g.constraints.end() && !it->second.empty())
      constraints[t] = constraints_to_json(it->second);
  }
  doc["constraints"] = constraints;

  ojson choosers = ojson::object();
  for (const auto& [name, chooser] : g.choosers)
    choosers[name] = node_to_json(chooser.root);
  doc["choosers"] = choosers;

  ojson lex = ojson::array();
  for (const auto& item : lexicon.items) {
    ojson ij = ojson::object();
    ij["id"] = item.id;
    ojson spellings = ojson::object();
    for (const auto& [form, text] : item.spellings) spellings[form] = text;
    ij["spellings"] = spellings;
    ij["wordClasses"] = item.word_classes;
    ij["closedClass"] = item.closed_class;
    lex.push_back(std::move(ij));
  }
  doc["lexicon"] = lex;

  return doc.dump(2) + "\n";
}

Grammar grammar_from_json_text(const std::string& text, const std::string& origin) {
  ojson doc = parse_json(text, origin);
  if (!doc.is_object()) bad(origin, "grammar document must be an object");
  if (!doc.contains("formatVersion") || !doc.at("formatVersion").is_number() ||
      doc.at("formatVersion").get<int>() != 1)
    bad(origin, "unsupported or missing formatVersion (expected 1)");

  Grammar g;
  TypeLattice& lat = g.lattice;
  if (doc.contains("root")) lat.root = as_string(doc.at("root"), origin, "root");
  if (doc.contains("wordRoot"))
    lat.word_root = as_string(doc.at("wordRoot"), origin, "wordRoot");
  if (doc.contains("extracted")) {
    if (!doc.at("extracted").is_boolean()) bad(origin, "'extracted' must be boolean");
    lat.extracted = doc.at("extracted").get<bool>();
  }
  if (!doc.contains("types") || !doc.at("types").is_array())
    bad(origin, "missing 'types' array");
  for (const auto& t : doc.at("types"))
    lat.types.push_back(as_string(t, origin, "type name"));

  if (!doc.contains("systems") || !doc.at("systems").is_array())
    bad(origin, "missing 'systems' array");
  for (const auto& sj : doc.at("systems")) {
    if (!sj.is_object()) bad(origin, "each system must be an object");
    System s;
    s.name = as_string(sj.value("name", ojson()), origin, "system name");
    if (!sj.contains("entry")) bad(origin, "system '" + s.name + "' lacks entry");
    s.entry = normalize_entry(entry_from_json(sj.at("entry"), origin));
    if (!sj.contains("outputs") || !sj.at("outputs").is_array())
      bad(origin, "system '" + s.name + "' lacks outputs");
    for (const auto& o : sj.at("outputs"))
      s.outputs.push_back(as_string(o, origin, "output"));
    if (sj.contains("chooser"))
      s.chooser = as_string(sj.at("chooser"), origin, "chooser reference");
    lat.systems.push_back(std::move(s));
  }

  if (doc.contains("constraints")) {
    if (!doc.at("constraints").is_object())
      bad(origin, "'constraints' must be an object");
    for (const auto& [type, cj] : doc.at("constraints").items())
      lat.constraints.emplace(type,
                              constraints_from_json(cj, origin + " (" + type + ")"));
  }

  if (doc.contains("choosers")) {
    if (!doc.at("choosers").is_object()) bad(origin, "'choosers' must be an object");
    for (const auto& [name, nj] : doc.at("choosers").items()) {
      Chooser c;
      c.name = name;
      c.root = node_from_json(nj, origin + " (chooser " + name + ")");
      lat.choosers.emplace(name, std::move(c));
    }
  }

  if (doc.contains("lexicon")) {
    if (!doc.at("lexicon").is_array()) bad(origin, "'lexicon' must be an array");
    for (const auto& ij : doc.at("lexicon")) {
      if (!ij.is_object()) bad(origin, "each lexical item must be an object");
      LexicalItem item;
      item.id = as_string(ij.value("id", ojson()), origin, "item id");
      if (ij.contains("spellings")) {
        if (!ij.at("spellings").is_object())
          bad(origin, "spellings of '" + item.id + "' must be an object");
        for (const auto& [form, t] : ij.at("spellings").items())
          item.spellings.emplace_back(form, as_string(t, origin, "spelling"));
      }
      if (ij.contains("wordClasses")) {
        if (!ij.at("wordClasses").is_array())
          bad(origin, "wordClasses of '" + item.id + "' must be an array");
        for (const auto& wc : ij.at("wordClasses"))
          item.word_classes.push_back(as_string(wc, origin, "word class"));
      }
      if (ij.contains("closedClass")) {
        if (!ij.at("closedClass").is_boolean())
          bad(origin, "closedClass of '" + item.id + "' must be boolean");
        item.closed_class = ij.at("closedClass").get<bool>();
      }
      g.lexicon.items.push_back(std::move(item));
    }
  }

  lat.rebuild_indexes();
  g.lexicon.rebuild_index();
  ValidationReport report = validate_lattice(
      lat, lat.extracted ? LatticeMode::Extracted : LatticeMode::Authored);
  if (!report.ok())
    throw ValidationError(origin + " is not a well-formed grammar:\n" +
                          report.to_string());
  return g;
}

Grammar load_grammar(const std::filesystem::path& path) {
  return grammar_from_json_text(read_file(path), path.string());
}

void save_grammar(const TypeLattice& g, const Lexicon& lexicon,
                  const std::filesystem::path& path) {
  write_file(path, grammar_to_text(g, lexicon));
}

// ---- corpus ---------------------------------------------------------------

SemanticSpec spec_from_json_text(const std::string& line, const std::string& origin,
                                 int line_number) {
  std::string ctx = origin + ":" + std::to_string(line_number);
  ojson j = parse_json(line, ctx);
  if (!j.is_object()) bad(ctx, "semantic spec must be an object");
  SemanticSpec spec;
  spec.root = as_string(j.value("root", ojson()), ctx, "root concept");
  if (j.contains("concepts")) {
    if (!j.at("concepts").is_object()) bad(ctx, "'concepts' must be an object");
    for (const auto& [id, attrs] : j.at("concepts").items()) {
      if (!attrs.is_object()) bad(ctx, "concept '" + id + "' must be an object");
      SemanticSpec::Attrs a;
      for (const auto& [k, v] : attrs.items())
        a.emplace(k, as_string(v, ctx, "attribute value"));
      spec.concepts.emplace(id, std::move(a));
    }
  }
  if (j.contains("answers")) {
    if (!j.at("answers").is_array()) bad(ctx, "'answers' must be an array");
    for (const auto& row : j.at("answers")) {
      if (!row.is_array() || row.size() != 3 || !row[1].is_array())
        bad(ctx, "each answer must be [inquiry, [concepts...], answer]");
      std::vector<std::string> args;
      for (const auto& a : row[1]) args.push_back(as_string(a, ctx, "concept"));
      spec.answers[{as_string(row[0], ctx, "inquiry"), std::move(args)}] =
          as_string(row[2], ctx, "answer");
    }
  }
  return spec;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::string text = read_file(path);
  Corpus corpus;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    corpus.push_back(spec_from_json_text(line, path.string(), line_number));
  }
  return corpus;
}

std::string corpus_to_text(const Corpus& corpus) {
  std::string out;
  for (const auto& spec : corpus) {
    ojson j = ojson::object();
    j["root"] = spec.root;
    ojson concepts = ojson::object();
    for (const auto& [id, attrs] : spec.concepts) {
      ojson a = ojson::object();
      for (const auto& [k, v] : attrs) a[k] = v;
      concepts[id] = std::move(a);
    }
    j["concepts"] = concepts;
    ojson answers = ojson::array();
    for (const auto& [key, answer] : spec.answers)
      answers.push_back(ojson::array({key.first, key.second, answer}));
    j["answers"] = answers;
    out += j.dump() + "\n";
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  write_file(path, corpus_to_text(corpus));
}

// ---- goal types, responses, usage ----------------------------------------

GoalTypeSet load_goal_types(const std::filesystem::path& path) {
  GoalTypeSet goal;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string prov = "# provenance: ";
      const std::string sent = "# sentences: ";
      if (line.rfind(prov, 0) == 0) goal.provenance = line.substr(prov.size());
      if (line.rfind(sent, 0) == 0)
        goal.sentence_count = std::atoi(line.c_str() + sent.size());
      continue;
    }
    goal.types.insert(line);
  }
  return goal;
}

std::string goal_types_to_text(const GoalTypeSet& goal) {
  std::string out;
  if (!goal.provenance.empty()) out += "# provenance: " + goal.provenance + "\n";
  if (goal.sentence_count > 0)
    out += "# sentences: " + std::to_string(goal.sentence_count) + "\n";
  for (const auto& t : goal.types) out += t + "\n";
  return out;
}

void save_goal_types(const GoalTypeSet& goal, const std::filesystem::path& path) {
  write_file(path, goal_types_to_text(goal));
}

ResponseLog load_responses(const std::filesystem::path& path) {
  std::string text = read_file(path);
  ojson j = parse_json(text, path.string());
  if (!j.is_object()) bad(path.string(), "response log must be an object");
  ResponseLog log;
  for (const auto& [inquiry, answers] : j.items()) {
    if (!answers.is_array())
      bad(path.string(), "answers of '" + inquiry + "' must be an array");
    for (const auto& a : answers)
      log[inquiry].insert(as_string(a, path.string(), "answer"));
  }
  return log;
}

std::string responses_to_text(const ResponseLog& log) {
  ojson j = ojson::object();
  for (const auto& [inquiry, answers] : log)
    j[inquiry] = std::vector<std::string>(answers.begin(), answers.end());
  return j.dump(2) + "\n";
}

void save_responses(const ResponseLog& log, const std::filesystem::path& path) {
  write_file(path, responses_to_text(log));
}

std::set<std::string> load_usage(const std::filesystem::path& path) {
  std::set<std::string> usage;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    usage.insert(line);
  }
  return usage;
}

std::string usage_to_text(const std::set<std::string>& usage) {
  std::string out;
  for (const auto& id : usage) out += id + "\n";
  return out;
}

void save_usage(const std::set<std::string>& usage,
                const std::filesystem::path& path) {
  write_file(path, usage_to_text(usage));
}

// ---- reports --------------------------------------------------------------

namespace {

ojson string_pairs(const std::vector<std::pair<std::string, std::string>>& v,
                   const char* a, const char* b) {
  ojson arr = ojson::array();
  for (const auto& [x, y] : v) {
    ojson o = ojson::object();
    o[a] = x;
    o[b] = y;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::string join(const TypeSet& s) {
  std::string out;
  for (const auto& t : s) {
    if (!out.empty()) out += ", ";
    out += t;
  }
  return out.empty() ? "(none)" : out;
}

std::string percent(double improvement) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", improvement * 100.0);
  return buf;
}

}  // namespace

std::string extraction_report_to_json(const ExtractionReport& r) {
  ojson j = ojson::object();
  j["sourceSystems"] = r.source_systems;
  j["keptSystems"] = r.kept_systems;
  j["sourceTypes"] = r.source_types;
  j["keptTypes"] = r.kept_types;
  j["excisedPseudotypes"] =
      std::vector<std::string>(r.excised_pseudotypes.begin(),
                               r.excised_pseudotypes.end());
  j["droppedTypes"] =
      std::vector<std::string>(r.dropped_types.begin(), r.dropped_types.end());
  j["collapsedSystems"] = std::vector<std::string>(r.collapsed_systems.begin(),
                                                   r.collapsed_systems.end());
  j["unreachableSystems"] = std::vector<std::string>(
      r.unreachable_systems.begin(), r.unreachable_systems.end());
  j["raisedConstraints"] = string_pairs(r.raised_constraints, "from", "to");
  j["percolatedActions"] = string_pairs(r.percolated_actions, "from", "to");
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string extraction_report_to_table(const ExtractionReport& r) {
  std::ostringstream out;
  out << "systems:             " << r.kept_systems << " kept of " << r.source_systems
      << " (" << r.collapsed_systems.size() << " collapsed, "
      << r.unreachable_systems.size() << " unreachable)\n";
  out << "types:               " << r.kept_types << " kept of " << r.source_types
      << "\n";
  out << "excised pseudotypes: " << join(r.excised_pseudotypes) << "\n";
  out << "dropped types:       " << join(r.dropped_types) << "\n";
  if (!r.raised_constraints.empty()) {
    out << "raised constraints:\n";
    for (const auto& [from, to] : r.raised_constraints)
      out << "  " << from << " -> " << to << "\n";
  }
  if (!r.percolated_actions.empty()) {
    out << "percolated actions:\n";
    for (const auto& [from, to] : r.percolated_actions)
      out << "  " << from << " -> " << to << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

namespace {

const char* verdict_name(SentenceVerdict::Status s) {
  switch (s) {
    case SentenceVerdict::Status::Equal:
      return "equal";
    case SentenceVerdict::Status::Mismatch:
      return "mismatch";
    case SentenceVerdict::Status::FullError:
      return "full-error";
    case SentenceVerdict::Status::SubError:
      return "sub-error";
  }
  return "?";
}

}  // namespace

std::string consistency_report_to_json(const ConsistencyReport& r) {
  ojson j = ojson::object();
  j["consistent"] = r.consistent();
  ojson rows = ojson::array();
  for (const auto& v : r.verdicts) {
    ojson row = ojson::object();
    row["index"] = v.index;
    row["status"] = verdict_name(v.status);
    row["fullText"] = v.full_text;
    row["subText"] = v.sub_text;
    row["usedTypesConsistent"] = v.used_types_consistent;
    row["fullSteps"] = v.full_steps;
    row["subSteps"] = v.sub_steps;
    if (!v.detail.empty()) row["detail"] = v.detail;
    rows.push_back(std::move(row));
  }
  j["sentences"] = rows;
  j["fullStepsTotal"] = r.full_steps_total;
  j["subStepsTotal"] = r.sub_steps_total;
  j["stepRatio"] = r.step_ratio();
  return j.dump(2) + "\n";
}

std::string consistency_report_to_table(const ConsistencyReport& r) {
  std::ostringstream out;
  for (const auto& v : r.verdicts) {
    out << (v.status == SentenceVerdict::Status::Equal && v.used_types_consistent
                ? "ok   "
                : "FAIL ")
        << v.index << "  [" << verdict_name(v.status) << "] " << v.full_text;
    if (v.status == SentenceVerdict::Status::Mismatch)
      out << "  !=  " << v.sub_text;
    if (!v.detail.empty()) out << "  (" << v.detail << ")";
    if (!v.used_types_consistent) out << "  (used-type sets diverge)";
    out << "\n";
  }
  out << (r.consistent() ? "consistent" : "INCONSISTENT") << ": "
      << r.verdicts.size() << " sentences, steps " << r.sub_steps_total << "/"
      << r.full_steps_total;
  if (r.full_steps_total > 0) out << " (" << percent(1.0 - r.step_ratio()) << " saved)";
  out << "\n";
  return out.str();
}

std::string bench_report_to_json(const BenchReport& r) {
  auto row_json = [](const BenchRow& row) {
    ojson j = ojson::object();
    j["label"] = row.label;
    j["fullSteps"] = row.full_steps;
    j["subSteps"] = row.sub_steps;
    j["improvement"] = row.improvement;
    j["sentence"] = row.sentence;
    return j;
  };
  ojson j = ojson::object();
  ojson rows = ojson::array();
  for (const auto& row : r.sentences) rows.push_back(row_json(row));
  j["sentences"] = rows;
  j["best"] = row_json(r.best);
  j["worst"] = row_json(r.worst);
  j["average"] = row_json(r.average);
  j["fullStepsTotal"] = r.full_steps_total;
  j["subStepsTotal"] = r.sub_steps_total;
  j["stepRatio"] = r.step_ratio;
  return j.dump(2) + "\n";
}

std::string bench_report_to_table(const BenchReport& r) {
  std::vector<const BenchRow*> rows;
  for (const auto& row : r.sentences) rows.push_back(&row);
  std::vector<const BenchRow*> summary{&r.worst, &r.best, &r.average};
  size_t label_w = 5, full_w = 4, sub_w = 3;
  auto widen = [&](const BenchRow& row) {
    label_w = std::max(label_w, row.label.size());
    full_w = std::max(full_w, std::to_string(row.full_steps).size());
    sub_w = std::max(sub_w, std::to_string(row.sub_steps).size());
  };
  for (const auto* row : rows) widen(*row);
  for (const auto* row : summary) widen(*row);

  std::ostringstream out;
  auto line = [&](const BenchRow& row) {
    out << std::left << std::setw(static_cast<int>(label_w)) << row.label << "  "
        << std::right << std::setw(static_cast<int>(full_w)) << row.full_steps
        << "  " << std::setw(static_cast<int>(sub_w)) << row.sub_steps << "  "
        << std::setw(11) << percent(row.improvement) << "  " << row.sentence
        << "\n";
  };
  out << std::left << std::setw(static_cast<int>(label_w)) << "label" << "  "
      << std::right << std::setw(static_cast<int>(full_w)) << "full" << "  "
      << std::setw(static_cast<int>(sub_w)) << "sub" << "  " << std::setw(11)
      << "improvement" << "  " << "sentence" << "\n";
  for (const auto* row : rows) line(*row);
  if (!r.sentences.empty()) {
    line(r.worst);
    line(r.best);
    line(r.average);
    out << "totals: " << r.sub_steps_total << "/" << r.full_steps_total
        << " steps (" << percent(1.0 - r.step_ratio) << " saved)\n";
  }
  return out.str();
}

// ---- plain-text notation --------------------------------------------------

namespace {

std::vector<std::string> tokenize_notation(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  bool comment = false;
  for (char ch : text) {
    if (comment) {
      if (ch == '\n') comment = false;
      continue;
    }
    if (ch == '#') {
      flush();
      comment = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
      continue;
    }
    if (ch == '(' || ch == ')' || ch == '=' || ch == '|' || ch == ':' ||
        ch == '.') {
      flush();
      tokens.push_back(std::string(1, ch));
      continue;
    }
    current += ch;
  }
  flush();
  return tokens;
}

EntryExpr parse_entry_tokens(const std::vector<std::string>& tokens, size_t& pos) {
  if (pos >= tokens.size()) throw ParseError("notation: entry expected");
  if (tokens[pos] != "(") {
    if (tokens[pos] == ")" || tokens[pos] == "=" || tokens[pos] == "|" ||
        tokens[pos] == "." || tokens[pos] == ":")
      throw ParseError("notation: unexpected '" + tokens[pos] + "' in entry");
    return EntryExpr::make_atom(tokens[pos++]);
  }
  ++pos;  // '('
  if (pos >= tokens.size()) throw ParseError("notation: unterminated '('");
  std::string op = tokens[pos++];
  std::transform(op.begin(), op.end(), op.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (op != "AND" && op != "OR")
    throw ParseError("notation: expected AND or OR after '(', got '" + op + "'");
  std::vector<EntryExpr> kids;
  while (pos < tokens.size() && tokens[pos] != ")")
    kids.push_back(parse_entry_tokens(tokens, pos));
  if (pos >= tokens.size()) throw ParseError("notation: unterminated '('");
  ++pos;  // ')'
  if (kids.empty()) throw ParseError("notation: empty (" + op + ")");
  return op == "AND" ? EntryExpr::make_and(std::move(kids))
                     : EntryExpr::make_or(std::move(kids));
}

}  // namespace

EntryExpr parse_entry_text(const std::string& text) {
  auto tokens = tokenize_notation(text);
  size_t pos = 0;
  EntryExpr e = parse_entry_tokens(tokens, pos);
  if (pos != tokens.size())
    throw ParseError("notation: trailing tokens after entry");
  return e;
}

std::vector<System> parse_system_notation(const std::string& text) {
  auto tokens = tokenize_notation(text);
  std::vector<System> systems;
  std::map<std::string, int> name_uses;
  size_t pos = 0;
  while (pos < tokens.size()) {
    std::string name;
    if (pos + 1 < tokens.size() && tokens[pos + 1] == ":") {
      name = tokens[pos];
      pos += 2;
    }
    EntryExpr raw = parse_entry_tokens(tokens, pos);
    if (pos >= tokens.size() || tokens[pos] != "=")
      throw ParseError("notation: expected '=' after entry");
    ++pos;
    std::vector<std::string> outputs;
    for (;;) {
      if (pos >= tokens.size())
        throw ParseError("notation: statement not terminated by '.'");
      const std::string& tok = tokens[pos];
      if (tok == "." ) {
        ++pos;
        break;
      }
      if (tok == "|") {
        ++pos;
        continue;
      }
      if (tok == "(" || tok == ")" || tok == "=" || tok == ":")
        throw ParseError("notation: unexpected '" + tok + "' in outputs");
      outputs.push_back(tok);
      ++pos;
    }
    if (outputs.empty())
      throw ParseError("notation: statement has no outputs");
    if (name.empty()) {
      name = raw.kind == EntryExpr::Kind::Atom ? raw.atom : "system";
      int n = ++name_uses[name];
      if (n > 1) name += "_" + std::to_string(n);
    } else {
      ++name_uses[name];
    }
    System s;
    s.name = std::move(name);
    s.entry = normalize_entry(raw);
    s.outputs = std::move(outputs);
    systems.push_back(std::move(s));
  }
  return systems;
}

std::string systems_to_json_text(const std::vector<System>& systems) {
  ojson arr = ojson::array();
  for (const auto& s : systems) {
    ojson sj = ojson::object();
    sj["name"] = s.name;
    sj["entry"] = entry_to_json(s.entry);
    sj["outputs"] = s.outputs;
    if (!s.chooser.empty()) sj["chooser"] = s.chooser;
    arr.push_back(std::move(sj));
  }
  ojson doc = ojson::object();
  doc["systems"] = arr;
  return doc.dump(2) + "\n";
}

}  // namespace sfg
