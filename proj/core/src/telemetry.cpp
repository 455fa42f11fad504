#include "sfg/telemetry.hpp"

#include <algorithm>
#include <cmath>

#include "sfg/errors.hpp"

namespace sfg {

namespace {

// Adds the single-atom-entry ancestors of every member: a type whose
// introducing system hangs off exactly one supertype drags that supertype
// in, transitively. Keeps word classes attached to their axioms.
void close_upward(const TypeLattice& g, TypeSet& types) {
  std::vector<std::string> work(types.begin(), types.end());
  while (!work.empty()) {
    std::string t = work.back();
    work.pop_back();
    const System* intro = g.introducing_system(t);
    if (!intro) continue;
    if (is_single_atom_dnf(intro->entry)) {
      const std::string& super = single_atom(intro->entry);
      if (types.insert(super).second) work.push_back(super);
    }
  }
}

}  // namespace

TrainingResult collect_goal_types(const TypeLattice& g, const Lexicon& lexicon,
                                  const Corpus& corpus, int plateau_window) {
  TrainingResult result;
  TypeSet cumulative{g.root};
  int index = 0;
  int last_growth = 0;
  for (const auto& spec : corpus) {
    ++index;
    size_t before = cumulative.size();
    try {
      SentenceRun run = generate_sentence_run(g, lexicon, spec);
      cumulative.insert(run.realization.used_types.begin(),
                        run.realization.used_types.end());
      cumulative.insert(run.used_fillers.begin(), run.used_fillers.end());
      close_upward(g, cumulative);
      result.usage.insert(run.used_items.begin(), run.used_items.end());
      for (const auto& [inquiry, answers] : run.realization.inquiry_log)
        result.responses[inquiry].insert(answers.begin(), answers.end());
    } catch (const Error& e) {
      result.warnings.push_back("sentence " + std::to_string(index) +
                                " failed: " + e.what());
    }
    if (cumulative.size() > before) last_growth = index;
    result.series.points.emplace_back(index, static_cast<int>(cumulative.size()));
  }
  if (index > 0 && index - last_growth >= plateau_window)
    result.plateau_at = last_growth;

  result.goal.types = std::move(cumulative);
  result.goal.sentence_count = index;
  result.goal.provenance =
      "trained on " + std::to_string(index) + " sentences";
  return result;
}

std::string emit_growth_curve(const GrowthSeries& series) {
  std::string out = "sentence,cumulative_types\n";
  for (const auto& [i, n] : series.points)
    out += std::to_string(i) + "," + std::to_string(n) + "\n";
  return out;
}

BenchReport benchmark_corpus(const TypeLattice& full, const Lexicon& full_lex,
                             const TypeLattice& sub, const Lexicon& sub_lex,
                             const Corpus& corpus) {
  BenchReport report;
  int index = 0;
  for (const auto& spec : corpus) {
    ++index;
    Realization full_r = generate_sentence(full, full_lex, spec);
    Realization sub_r = generate_sentence(sub, sub_lex, spec);
    BenchRow row;
    row.label = std::to_string(index);
    row.full_steps = step_metric(full_r);
    row.sub_steps = step_metric(sub_r);
    row.improvement =
        row.full_steps == 0
            ? 0.0
            : 1.0 - static_cast<double>(row.sub_steps) / row.full_steps;
    row.sentence = full_r.text;
    report.full_steps_total += row.full_steps;
    report.sub_steps_total += row.sub_steps;
    report.sentences.push_back(std::move(row));
  }
  if (!report.sentences.empty()) {
    auto better = [](const BenchRow& a, const BenchRow& b) {
      return a.improvement < b.improvement;
    };
    auto [lo, hi] = std::minmax_element(report.sentences.begin(),
                                        report.sentences.end(), better);
    report.worst = *lo;
    report.worst.label = "worst";
    report.best = *hi;
    report.best.label = "best";
    BenchRow avg;
    avg.label = "average";
    avg.full_steps = static_cast<long>(
        std::lround(static_cast<double>(report.full_steps_total) /
                    report.sentences.size()));
    avg.sub_steps = static_cast<long>(
        std::lround(static_cast<double>(report.sub_steps_total) /
                    report.sentences.size()));
    avg.improvement =
        report.full_steps_total == 0
            ? 0.0
            : 1.0 - static_cast<double>(report.sub_steps_total) /
                        report.full_steps_total;
    report.average = std::move(avg);
    report.step_ratio =
        report.full_steps_total == 0
            ? 0.0
            : static_cast<double>(report.sub_steps_total) /
                  report.full_steps_total;
  }
  return report;
}

}  // namespace sfg
