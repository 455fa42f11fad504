// Wall-clock comparison of full-grammar generation, subgrammar generation
// and the extraction step itself, over the bundled fixture corpus.
#include <benchmark/benchmark.h>

#include "sfg/extractor.hpp"
#include "sfg/generator.hpp"
#include "sfg/io.hpp"
#include "sfg/telemetry.hpp"

namespace {

struct Fixtures {
  sfg::Grammar full;
  sfg::Corpus corpus;
  sfg::TrainingResult trained;
  sfg::ExtractionResult sub;
  sfg::Lexicon sub_lex;

  Fixtures()
      : full(sfg::load_grammar(std::string(SFG_FIXTURES_DIR) +
                               "/biography.grammar.json")),
        corpus(sfg::load_corpus(std::string(SFG_FIXTURES_DIR) +
                                "/biography_corpus.jsonl")),
        trained(sfg::collect_goal_types(full.lattice, full.lexicon, corpus)),
        sub(sfg::extract_subgrammar(full.lattice, trained.goal)),
        sub_lex(sfg::extract_sublexicon(full.lexicon, sub.grammar.all_types(),
                                        trained.usage)) {}

  static const Fixtures& get() {
    static Fixtures f;
    return f;
  }
};

void BM_GenerateFullGrammar(benchmark::State& state) {
  const auto& f = Fixtures::get();
  size_t i = 0;
  for (auto _ : state) {
    auto r = sfg::generate_sentence(f.full.lattice, f.full.lexicon,
                                    f.corpus[i++ % f.corpus.size()]);
    benchmark::DoNotOptimize(r.text);
  }
}
BENCHMARK(BM_GenerateFullGrammar);

void BM_GenerateSubgrammar(benchmark::State& state) {
  const auto& f = Fixtures::get();
  size_t i = 0;
  for (auto _ : state) {
    auto r = sfg::generate_sentence(f.sub.grammar, f.sub_lex,
                                    f.corpus[i++ % f.corpus.size()]);
    benchmark::DoNotOptimize(r.text);
  }
}
BENCHMARK(BM_GenerateSubgrammar);

void BM_ExtractSubgrammar(benchmark::State& state) {
  const auto& f = Fixtures::get();
  for (auto _ : state) {
    auto result = sfg::extract_subgrammar(f.full.lattice, f.trained.goal);
    benchmark::DoNotOptimize(result.grammar);
  }
}
BENCHMARK(BM_ExtractSubgrammar);

void BM_TrainOnCorpus(benchmark::State& state) {
  const auto& f = Fixtures::get();
  for (auto _ : state) {
    auto result = sfg::collect_goal_types(f.full.lattice, f.full.lexicon, f.corpus);
    benchmark::DoNotOptimize(result.goal);
  }
}
BENCHMARK(BM_TrainOnCorpus);

}  // namespace

BENCHMARK_MAIN();
