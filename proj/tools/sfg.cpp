// Command-line front end: train / extract / generate / verify / bench / import.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfg/errors.hpp"
#include "sfg/extractor.hpp"
#include "sfg/generator.hpp"
#include "sfg/io.hpp"
#include "sfg/telemetry.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;       // parse or validation failure
constexpr int kExitGeneration = 3;  // generation failed
constexpr int kExitMismatch = 4;    // verification found differences
constexpr int kExitOutOfBounds = 5; // out of bounds without a fallback grammar

struct TrainArgs {
  std::string grammar, corpus, out_goals;
  std::string growth, responses, usage;
  int plateau_window = 25;
};

struct ExtractArgs {
  std::string grammar, goals, out;
  std::string report, usage, responses;
  bool prune = false;
  bool quiet = false;
};

struct GenerateArgs {
  std::string grammar, corpus, fallback;
  int index = 0;  // 1-based; 0 = whole corpus
  bool show_steps = false;
};

struct CompareArgs {
  std::string full, sub, corpus, report;
};

struct ImportArgs {
  std::string input, out;
};

int run_train(const TrainArgs& a) {
  sfg::Grammar g = sfg::load_grammar(a.grammar);
  sfg::Corpus corpus = sfg::load_corpus(a.corpus);
  sfg::TrainingResult r =
      sfg::collect_goal_types(g.lattice, g.lexicon, corpus, a.plateau_window);
  sfg::save_goal_types(r.goal, a.out_goals);
  if (!a.growth.empty())
    std::ofstream(a.growth, std::ios::binary) << sfg::emit_growth_curve(r.series);
  if (!a.responses.empty()) sfg::save_responses(r.responses, a.responses);
  if (!a.usage.empty()) sfg::save_usage(r.usage, a.usage);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "trained on " << r.goal.sentence_count << " sentences: "
            << r.goal.types.size() << " goal types";
  if (r.plateau_at >= 0)
    std::cout << " (stable since sentence " << r.plateau_at << ")";
  std::cout << "\n";
  return kExitOk;
}

int run_extract(const ExtractArgs& a) {
  sfg::Grammar g = sfg::load_grammar(a.grammar);
  sfg::GoalTypeSet goal = sfg::load_goal_types(a.goals);
  sfg::ExtractionOptions options;
  sfg::ResponseLog responses;
  if (!a.responses.empty()) {
    responses = sfg::load_responses(a.responses);
    options.responses = &responses;
  }
  options.prune_choosers = a.prune;
  sfg::ExtractionResult result = sfg::extract_subgrammar(g.lattice, goal, options);

  std::set<std::string> usage;
  if (!a.usage.empty()) {
    usage = sfg::load_usage(a.usage);
  } else {
    for (const auto& item : g.lexicon.items) usage.insert(item.id);
    std::cerr << "note: no usage log given; keeping every closed-class item\n";
  }
  sfg::Lexicon sublex = sfg::extract_sublexicon(
      g.lexicon, result.grammar.all_types(), usage);

  sfg::save_grammar(result.grammar, sublex, a.out);
  if (!a.report.empty())
    std::ofstream(a.report) << sfg::extraction_report_to_json(result.report);
  if (!a.quiet) std::cout << sfg::extraction_report_to_table(result.report);
  return kExitOk;
}

int run_generate(const GenerateArgs& a) {
  sfg::Grammar g = sfg::load_grammar(a.grammar);
  std::optional<sfg::Grammar> fallback;
  if (!a.fallback.empty()) fallback = sfg::load_grammar(a.fallback);
  sfg::Corpus corpus = sfg::load_corpus(a.corpus);
  if (a.index < 0 || a.index > static_cast<int>(corpus.size()))
    throw sfg::ParseError("sentence index " + std::to_string(a.index) +
                          " outside corpus of " + std::to_string(corpus.size()));
  size_t from = a.index > 0 ? a.index - 1 : 0;
  size_t to = a.index > 0 ? a.index : corpus.size();
  for (size_t i = from; i < to; ++i) {
    std::string prefix;
    sfg::Realization r;
    try {
      r = sfg::generate_sentence(g.lattice, g.lexicon, corpus[i]);
    } catch (const sfg::OutOfBoundsError& e) {
      if (!fallback) throw;
      r = sfg::generate_sentence(fallback->lattice, fallback->lexicon, corpus[i]);
      prefix = "[fallback] ";
    }
    std::cout << prefix << r.text;
    if (a.show_steps) std::cout << "\t" << sfg::step_metric(r);
    std::cout << "\n";
  }
  return kExitOk;
}

int run_verify(const CompareArgs& a) {
  sfg::Grammar full = sfg::load_grammar(a.full);
  sfg::Grammar sub = sfg::load_grammar(a.sub);
  sfg::Corpus corpus = sfg::load_corpus(a.corpus);
  sfg::ConsistencyReport report = sfg::verify_consistency(
      full.lattice, full.lexicon, sub.lattice, sub.lexicon, corpus);
  std::cout << sfg::consistency_report_to_table(report);
  if (!a.report.empty())
    std::ofstream(a.report) << sfg::consistency_report_to_json(report);
  return report.consistent() ? kExitOk : kExitMismatch;
}

int run_bench(const CompareArgs& a) {
  sfg::Grammar full = sfg::load_grammar(a.full);
  sfg::Grammar sub = sfg::load_grammar(a.sub);
  sfg::Corpus corpus = sfg::load_corpus(a.corpus);
  sfg::BenchReport report = sfg::benchmark_corpus(
      full.lattice, full.lexicon, sub.lattice, sub.lexicon, corpus);
  std::cout << sfg::bench_report_to_table(report);
  if (!a.report.empty())
    std::ofstream(a.report) << sfg::bench_report_to_json(report);
  return kExitOk;
}

int run_import(const ImportArgs& a) {
  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw sfg::ParseError("cannot open '" + a.input + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string json = sfg::systems_to_json_text(sfg::parse_system_notation(buf.str()));
  if (a.out.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(a.out, std::ios::binary);
    out << json;
  }
  return kExitOk;
}

int exit_code_for(const sfg::Error& e, bool generating, bool has_fallback) {
  if (dynamic_cast<const sfg::OutOfBoundsError*>(&e))
    return generating && !has_fallback ? kExitOutOfBounds : kExitGeneration;
  if (dynamic_cast<const sfg::GenerationError*>(&e)) return kExitGeneration;
  return kExitInput;  // parse, validation, goal, unification, percolation
}

void report_error(const sfg::Error& e, bool json_errors) {
  if (!json_errors) {
    std::cerr << "error: " << e.what() << "\n";
    return;
  }
  nlohmann::ordered_json j;
  j["error"] = e.kind();
  j["message"] = e.what();
  if (const auto* p = dynamic_cast<const sfg::ParseError*>(&e)) {
    if (p->line > 0) {
      j["line"] = p->line;
      j["column"] = p->column;
    }
  }
  if (const auto* g = dynamic_cast<const sfg::GenerationError*>(&e)) {
    if (!g->constituent_path.empty()) j["constituentPath"] = g->constituent_path;
  }
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"systemic generation grammars: train, extract and compare"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "report errors as JSON on stderr");

  TrainArgs train_args;
  auto* train = app.add_subcommand(
      "train", "collect goal types and telemetry from a corpus");
  train->add_option("-g,--grammar", train_args.grammar, "grammar file")->required();
  train->add_option("-c,--corpus", train_args.corpus, "corpus (JSON lines)")->required();
  train->add_option("-o,--out", train_args.out_goals, "goal-type output file")->required();
  train->add_option("--growth", train_args.growth, "write growth-curve CSV here");
  train->add_option("--responses", train_args.responses,
                    "write observed inquiry responses here");
  train->add_option("--usage", train_args.usage, "write lexical usage log here");
  train->add_option("--plateau-window", train_args.plateau_window,
                    "sentences without new types to call the goal set stable");

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand(
      "extract", "extract the subgrammar for a goal-type set");
  extract->add_option("-g,--grammar", extract_args.grammar, "full grammar")->required();
  extract->add_option("-t,--goal-types", extract_args.goals, "goal-type file")->required();
  extract->add_option("-o,--out", extract_args.out, "subgrammar output file")->required();
  extract->add_option("--report", extract_args.report, "write JSON report here");
  extract->add_option("--usage", extract_args.usage,
                      "lexical usage log (from train) for the sublexicon");
  extract->add_option("--responses", extract_args.responses,
                      "observed responses (from train), for --prune-choosers");
  extract->add_flag("--prune-choosers", extract_args.prune,
                    "drop chooser branches never observed in training");
  extract->add_flag("-q,--quiet", extract_args.quiet, "suppress the summary table");

  GenerateArgs generate_args;
  auto* generate = app.add_subcommand("generate", "generate corpus sentences");
  generate->add_option("-g,--grammar", generate_args.grammar, "grammar file")->required();
  generate->add_option("-c,--corpus", generate_args.corpus, "corpus (JSON lines)")->required();
  generate->add_option("-n,--index", generate_args.index,
                       "1-based sentence index (default: all)");
  generate->add_option("--fallback", generate_args.fallback,
                       "full grammar to regenerate out-of-bounds sentences with");
  generate->add_flag("--steps", generate_args.show_steps,
                     "append the step count to each line");

  CompareArgs verify_args;
  auto* verify = app.add_subcommand(
      "verify", "check that a subgrammar reproduces the full grammar's output");
  verify->add_option("--full", verify_args.full, "full grammar")->required();
  verify->add_option("--sub", verify_args.sub, "subgrammar")->required();
  verify->add_option("-c,--corpus", verify_args.corpus, "corpus")->required();
  verify->add_option("--report", verify_args.report, "write JSON report here");

  CompareArgs bench_args;
  auto* bench = app.add_subcommand(
      "bench", "per-sentence step comparison of full grammar vs subgrammar");
  bench->add_option("--full", bench_args.full, "full grammar")->required();
  bench->add_option("--sub", bench_args.sub, "subgrammar")->required();
  bench->add_option("-c,--corpus", bench_args.corpus, "corpus")->required();
  bench->add_option("--report", bench_args.report, "write JSON report here");

  ImportArgs import_args;
  auto* import_cmd = app.add_subcommand(
      "import", "convert plain-text axiom notation to system JSON");
  import_cmd->add_option("-i,--input", import_args.input, "notation file")->required();
  import_cmd->add_option("-o,--out", import_args.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train->parsed()) return run_train(train_args);
    if (extract->parsed()) return run_extract(extract_args);
    if (generate->parsed()) return run_generate(generate_args);
    if (verify->parsed()) return run_verify(verify_args);
    if (bench->parsed()) return run_bench(bench_args);
    if (import_cmd->parsed()) return run_import(import_args);
  } catch (const sfg::Error& e) {
    report_error(e, json_errors);
    return exit_code_for(e, generate->parsed(), !generate_args.fallback.empty());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
