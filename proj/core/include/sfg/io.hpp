#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "sfg/extractor.hpp"
#include "sfg/lattice.hpp"
#include "sfg/lexicon.hpp"
#include "sfg/semantics.hpp"
#include "sfg/telemetry.hpp"

namespace sfg {

/// A grammar file bundles the lattice (with its choosers) and the lexicon.
struct Grammar {
  TypeLattice lattice;
  Lexicon lexicon;
};

/// Loads and validates a grammar document. The document's "extracted" flag
/// selects the validation mode. Throws ParseError / ValidationError.
Grammar load_grammar(const std::filesystem::path& path);
Grammar grammar_from_json_text(const std::string& text, const std::string& origin);

/// Canonical serialization: fixed key order, two-space indent, types and
/// systems in definition order, sorted filler sets. Loading the output and
/// saving again reproduces the bytes exactly.
std::string grammar_to_text(const TypeLattice& g, const Lexicon& lexicon);
void save_grammar(const TypeLattice& g, const Lexicon& lexicon,
                  const std::filesystem::path& path);

/// Corpus files hold one semantic spec per line (JSON Lines).
Corpus load_corpus(const std::filesystem::path& path);
SemanticSpec spec_from_json_text(const std::string& line, const std::string& origin,
                                 int line_number);
std::string corpus_to_text(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Goal-type files: '#' header comments carrying provenance, then one type
/// name per line, sorted.
GoalTypeSet load_goal_types(const std::filesystem::path& path);
std::string goal_types_to_text(const GoalTypeSet& goal);
void save_goal_types(const GoalTypeSet& goal, const std::filesystem::path& path);

ResponseLog load_responses(const std::filesystem::path& path);
std::string responses_to_text(const ResponseLog& log);
void save_responses(const ResponseLog& log, const std::filesystem::path& path);

std::set<std::string> load_usage(const std::filesystem::path& path);
std::string usage_to_text(const std::set<std::string>& usage);
void save_usage(const std::set<std::string>& usage,
                const std::filesystem::path& path);

std::string extraction_report_to_json(const ExtractionReport& report);
std::string extraction_report_to_table(const ExtractionReport& report);
std::string consistency_report_to_json(const ConsistencyReport& report);
std::string consistency_report_to_table(const ConsistencyReport& report);
std::string bench_report_to_json(const BenchReport& report);
std::string bench_report_to_table(const BenchReport& report);

/// Plain-text axiom notation, one statement per '.', e.g.
///   number : (OR class_name wh_nominal) = singular | plural .
/// The "name :" prefix is optional; '#' starts a line comment.
std::vector<System> parse_system_notation(const std::string& text);
std::string systems_to_json_text(const std::vector<System>& systems);

/// Entry expression from notation text: an atom or "(AND ...)" / "(OR ...)".
EntryExpr parse_entry_text(const std::string& text);

}  // namespace sfg
