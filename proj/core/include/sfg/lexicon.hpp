#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sfg {

/// One lexical item. `spellings` maps a form key (a word-class subtype such
/// as "past_verb", or the fallback "base") to surface text, in authored
/// order: when several keys match a constituent the first one wins.
struct LexicalItem {
  std::string id;
  std::vector<std::pair<std::string, std::string>> spellings;
  std::vector<std::string> word_classes;
  bool closed_class = false;

  const std::string* spelling_for(const std::string& form) const {
    for (const auto& [key, text] : spellings)
      if (key == form) return &text;
    return nullptr;
  }
};

struct Lexicon {
  std::vector<LexicalItem> items;  // authored order

  const LexicalItem* find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &items[it->second];
  }

  void rebuild_index() {
    index_.clear();
    for (size_t i = 0; i < items.size(); ++i) index_[items[i].id] = i;
  }

private:
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace sfg
