#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sfg/extractor.hpp"
#include "sfg/generator.hpp"
#include "sfg/lattice.hpp"
#include "sfg/lexicon.hpp"
#include "sfg/semantics.hpp"

namespace sfg {

/// Cumulative distinct-type counts per training sentence (1-based indices).
struct GrowthSeries {
  std::vector<std::pair<int, int>> points;  // (sentence index, cumulative types)
};

struct TrainingResult {
  GoalTypeSet goal;
  GrowthSeries series;
  ResponseLog responses;          // inquiry name -> answers observed
  std::set<std::string> usage;    // lexical items that produced text
  std::vector<std::string> warnings;  // sentences that failed to generate
  int plateau_at = -1;  // last sentence that added a type, if the tail is flat
};

/// Generates every corpus sentence with the full grammar and records the
/// types an application-tuned subgrammar must keep: every selected type,
/// every filler type of a realized insertion, and the single-atom-entry
/// closure upward from those (so word classes survive with their axioms).
/// `plateau_window`: the tail length (in sentences) with no new types after
/// which the goal set is considered stable.
TrainingResult collect_goal_types(const TypeLattice& g, const Lexicon& lexicon,
                                  const Corpus& corpus, int plateau_window = 25);

/// CSV rendering of a growth series: header then "sentence,cumulative_types".
std::string emit_growth_curve(const GrowthSeries& series);

struct BenchRow {
  std::string label;  // "best", "worst", "average" or a sentence index
  long full_steps = 0;
  long sub_steps = 0;
  double improvement = 0.0;  // 1 - sub/full
  std::string sentence;
};

struct BenchReport {
  std::vector<BenchRow> sentences;  // per corpus sentence, in order
  BenchRow best;                    // highest improvement
  BenchRow worst;                   // lowest improvement
  BenchRow average;
  long full_steps_total = 0;
  long sub_steps_total = 0;
  double step_ratio = 0.0;  // sub/full
};

/// Regenerates the corpus with both grammars and tabulates the per-sentence
/// step comparison (steps = systems fired + inquiries answered).
BenchReport benchmark_corpus(const TypeLattice& full, const Lexicon& full_lex,
                             const TypeLattice& sub, const Lexicon& sub_lex,
                             const Corpus& corpus);

}  // namespace sfg
