#include <algorithm>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "sfg/errors.hpp"
#include "sfg/extractor.hpp"
#include "sfg/io.hpp"
#include "sfg/telemetry.hpp"

using namespace sfg;

TEST_CASE("canonical grammar serialization is a fixpoint of load-save") {
  auto g = sfgtest::fixture_grammar();
  std::string once = grammar_to_text(g.lattice, g.lexicon);
  auto reloaded = grammar_from_json_text(once, "round-trip");
  std::string twice = grammar_to_text(reloaded.lattice, reloaded.lexicon);
  CHECK(once == twice);
  CHECK(once.back() == '\n');

  // The reloaded grammar is structurally identical, not just byte-identical.
  CHECK(reloaded.lattice.types == g.lattice.types);
  CHECK(reloaded.lattice.systems == g.lattice.systems);
  CHECK(reloaded.lattice.choosers == g.lattice.choosers);
  CHECK(reloaded.lattice.constraints == g.lattice.constraints);
  REQUIRE(reloaded.lexicon.items.size() == g.lexicon.items.size());
  for (size_t i = 0; i < g.lexicon.items.size(); ++i) {
    CHECK(reloaded.lexicon.items[i].id == g.lexicon.items[i].id);
    CHECK(reloaded.lexicon.items[i].spellings == g.lexicon.items[i].spellings);
  }
}

TEST_CASE("an extracted grammar survives the same round trip") {
  auto g = sfgtest::fixture_grammar();
  auto corpus = sfgtest::fixture_corpus();
  auto trained = collect_goal_types(g.lattice, g.lexicon, corpus);
  auto sub = extract_subgrammar(g.lattice, trained.goal);
  Lexicon sub_lex =
      extract_sublexicon(g.lexicon, sub.grammar.all_types(), trained.usage);

  std::string once = grammar_to_text(sub.grammar, sub_lex);
  auto reloaded = grammar_from_json_text(once, "sub");
  CHECK(reloaded.lattice.extracted);
  CHECK(grammar_to_text(reloaded.lattice, reloaded.lexicon) == once);
}

TEST_CASE("parse failures carry a position") {
  try {
    grammar_from_json_text("{\n  \"formatVersion\": 1,\n  \"root\": ???\n}", "bad");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.column > 0);
  }
}

TEST_CASE("structural violations at load time are validation errors") {
  auto g = sfgtest::fixture_grammar();
  std::string text = grammar_to_text(g.lattice, g.lexicon);
  auto doc = nlohmann::ordered_json::parse(text);

  auto broken = doc;
  auto& types = broken["types"];
  types.erase(std::remove(types.begin(), types.end(), "imperative"), types.end());
  CHECK_THROWS_AS(grammar_from_json_text(broken.dump(), "broken"), ValidationError);

  auto dangling = doc;
  dangling["types"].push_back("stray");
  CHECK_THROWS_AS(grammar_from_json_text(dangling.dump(), "dangling"),
                  ValidationError);

  auto no_version = doc;
  no_version.erase("formatVersion");
  CHECK_THROWS_AS(grammar_from_json_text(no_version.dump(), "nover"), ParseError);
}

TEST_CASE("the corpus file round-trips") {
  auto corpus = sfgtest::fixture_corpus();
  REQUIRE(corpus.size() == 50);
  CHECK(corpus[0].root == "s");
  CHECK(corpus[0].concepts.at("subw").at("lex") == "it_nathan_drake");
  CHECK(corpus[0].answers.at({"tense", {"s"}}) == "past");

  std::string text = corpus_to_text(corpus);
  sfgtest::TempDir tmp("corpus");
  sfgtest::write_file(tmp.path("c.jsonl"), text);
  auto reloaded = load_corpus(tmp.path("c.jsonl"));
  CHECK(corpus_to_text(reloaded) == text);
  REQUIRE(reloaded.size() == corpus.size());
  CHECK(reloaded[7].answers == corpus[7].answers);
  CHECK(reloaded[7].concepts == corpus[7].concepts);
}

TEST_CASE("corpus parse errors name the offending line") {
  sfgtest::TempDir tmp("badcorpus");
  sfgtest::write_file(tmp.path("c.jsonl"),
                      "{\"root\": \"s\", \"concepts\": {}, \"answers\": []}\n"
                      "{not json}\n");
  try {
    load_corpus(tmp.path("c.jsonl"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
}

TEST_CASE("goal-type files round-trip with their provenance header") {
  GoalTypeSet goal{{"clause", "start", "word"}, "trained on 3 sentences", 3};
  std::string text = goal_types_to_text(goal);
  auto lines = [&] {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }();
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "# provenance: trained on 3 sentences");
  CHECK(lines[1] == "# sentences: 3");
  CHECK(lines[2] == "clause");  // sorted body
  CHECK(lines[3] == "start");
  CHECK(lines[4] == "word");

  sfgtest::TempDir tmp("goals");
  save_goal_types(goal, tmp.path("g.txt"));
  auto reloaded = load_goal_types(tmp.path("g.txt"));
  CHECK(reloaded.types == goal.types);
  CHECK(reloaded.provenance == goal.provenance);
  CHECK(reloaded.sentence_count == goal.sentence_count);
}

TEST_CASE("response logs and usage lists round-trip") {
  ResponseLog log{{"tense", {"past", "present"}}, {"unittype", {"event"}}};
  sfgtest::TempDir tmp("logs");
  save_responses(log, tmp.path("r.json"));
  CHECK(load_responses(tmp.path("r.json")) == log);

  std::set<std::string> usage{"it_be", "it_the"};
  save_usage(usage, tmp.path("u.txt"));
  CHECK(load_usage(tmp.path("u.txt")) == usage);
  CHECK(usage_to_text(usage) == "it_be\nit_the\n");
}

TEST_CASE("report serializers emit well-formed JSON with stable keys") {
  auto g = sfgtest::fixture_grammar();
  auto corpus = sfgtest::fixture_corpus();
  auto trained = collect_goal_types(g.lattice, g.lexicon, corpus);
  auto sub = extract_subgrammar(g.lattice, trained.goal);
  Lexicon sub_lex =
      extract_sublexicon(g.lexicon, sub.grammar.all_types(), trained.usage);

  auto ej = nlohmann::json::parse(extraction_report_to_json(sub.report));
  CHECK(ej["sourceSystems"] == 17);
  CHECK(ej["keptSystems"] == 12);
  CHECK(ej["keptTypes"] == 29);
  CHECK(ej["excisedPseudotypes"].size() == 5);
  CHECK(ej["raisedConstraints"][0]["from"] == "indicative");
  CHECK(ej["raisedConstraints"][0]["to"] == "clause");

  auto verify = verify_consistency(g.lattice, g.lexicon, sub.grammar, sub_lex, corpus);
  auto vj = nlohmann::json::parse(consistency_report_to_json(verify));
  CHECK(vj["consistent"] == true);
  CHECK(vj["fullStepsTotal"] == 1754);
  CHECK(vj["subStepsTotal"] == 1202);
  CHECK(vj["sentences"].size() == 50);

  auto bench = benchmark_corpus(g.lattice, g.lexicon, sub.grammar, sub_lex, corpus);
  auto bj = nlohmann::json::parse(bench_report_to_json(bench));
  CHECK(bj["best"]["label"] == "best");
  CHECK(bj["stepRatio"].get<double>() == doctest::Approx(1202.0 / 1754.0));

  // Table renderings exist for people; spot-check shape only.
  CHECK(extraction_report_to_table(sub.report).find("12 kept of 17") !=
        std::string::npos);
  CHECK(consistency_report_to_table(verify).find("consistent: 50 sentences") !=
        std::string::npos);
  CHECK(bench_report_to_table(bench).find("average") != std::string::npos);
}

TEST_CASE("plain-notation import covers the statement forms") {
  std::string text = sfgtest::read_file(sfgtest::fixture_path("axioms.sys"));
  auto systems = parse_system_notation(text);
  REQUIRE(systems.size() == 5);
  CHECK(systems[0].name == "rank");
  CHECK(systems[0].entry == normalize_entry(EntryExpr::make_atom("start")));
  CHECK(systems[0].outputs ==
        std::vector<std::string>{"clause", "nominal_group", "prep_phrase", "word"});
  // Unnamed statements borrow the entry atom, disambiguated on reuse.
  CHECK(systems[1].name == "nominal_group");
  CHECK(systems[2].name == "nominal_group_2");
  CHECK(systems[3].name == "number");
  CHECK(systems[3].entry ==
        normalize_entry(EntryExpr::make_or({EntryExpr::make_atom("class_name"),
                                            EntryExpr::make_atom("wh_nominal")})));
  CHECK(systems[4].name == "determination");
  CHECK(systems[4].entry ==
        normalize_entry(EntryExpr::make_and({EntryExpr::make_atom("class_name"),
                                             EntryExpr::make_atom("nonwh_nominal")})));

  auto j = nlohmann::json::parse(systems_to_json_text(systems));
  REQUIRE(j["systems"].size() == 5);
  CHECK(j["systems"][3]["entry"]["or"].size() == 2);
}

TEST_CASE("notation errors are parse errors") {
  CHECK_THROWS_AS(parse_system_notation("a = b | c"), ParseError);   // no period
  CHECK_THROWS_AS(parse_system_notation("a = ."), ParseError);       // no outputs
  CHECK_THROWS_AS(parse_system_notation("a b | c ."), ParseError);   // no '='
  CHECK_THROWS_AS(parse_system_notation("(AND) = b ."), ParseError); // empty form
  CHECK_THROWS_AS(parse_entry_text("(NOT a)"), ParseError);
  CHECK_THROWS_AS(parse_entry_text("(AND a b"), ParseError);
  CHECK_THROWS_AS(parse_entry_text("a b"), ParseError);  // trailing tokens
  CHECK(parse_entry_text("(or a (and b c))") ==
        EntryExpr::make_or({EntryExpr::make_atom("a"),
                            EntryExpr::make_and({EntryExpr::make_atom("b"),
                                                 EntryExpr::make_atom("c")})}));
}
