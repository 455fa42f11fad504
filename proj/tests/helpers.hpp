#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sfg/io.hpp"

// SFG_FIXTURES_DIR and SFG_CLI_PATH are injected by the build.

namespace sfgtest {

inline std::string fixture_path(const std::string& name) {
  return std::string(SFG_FIXTURES_DIR) + "/" + name;
}

inline sfg::Grammar fixture_grammar() {
  return sfg::load_grammar(fixture_path("biography.grammar.json"));
}

inline sfg::Corpus fixture_corpus() {
  return sfg::load_corpus(fixture_path("biography_corpus.jsonl"));
}

inline sfg::Corpus fixture_oob_corpus() {
  return sfg::load_corpus(fixture_path("biography_oob.jsonl"));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

/// Fresh per-test scratch directory under the system temp dir.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    dir_ = base / ("sfgtest_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  std::filesystem::path dir_;
};

/// Uniform random expression over a fixed atom universe, for oracle tests.
/// Depth-bounded; inner nodes are And/Or with 2-4 children.
inline sfg::EntryExpr random_entry(std::mt19937& rng, int depth_budget,
                                   const std::vector<std::string>& universe) {
  std::uniform_int_distribution<int> pick_kind(0, 2);
  std::uniform_int_distribution<int> pick_atom(0, int(universe.size()) - 1);
  if (depth_budget <= 0 || pick_kind(rng) == 0)
    return sfg::EntryExpr::make_atom(universe[pick_atom(rng)]);
  std::uniform_int_distribution<int> pick_arity(2, 4);
  int arity = pick_arity(rng);
  std::vector<sfg::EntryExpr> kids;
  kids.reserve(arity);
  for (int i = 0; i < arity; ++i)
    kids.push_back(random_entry(rng, depth_budget - 1, universe));
  return pick_kind(rng) == 1 ? sfg::EntryExpr::make_and(std::move(kids))
                             : sfg::EntryExpr::make_or(std::move(kids));
}

/// Reference evaluator for arbitrary (non-normalized) expressions.
inline bool eval_entry(const sfg::EntryExpr& e, const sfg::TypeSet& present) {
  switch (e.kind) {
    case sfg::EntryExpr::Kind::Atom:
      return present.count(e.atom) > 0;
    case sfg::EntryExpr::Kind::And:
      for (const auto& k : e.kids)
        if (!eval_entry(k, present)) return false;
      return true;
    case sfg::EntryExpr::Kind::Or:
      for (const auto& k : e.kids)
        if (eval_entry(k, present)) return true;
      return false;
  }
  return false;
}

}  // namespace sfgtest
