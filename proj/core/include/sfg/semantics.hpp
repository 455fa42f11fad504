#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfg/chooser.hpp"

namespace sfg {

/// One sentence's semantic input: a root concept, a concept graph (concept
/// id -> attribute -> value, where a value may name another concept), and a
/// table of inquiry answers keyed by inquiry name plus resolved concept
/// arguments.
struct SemanticSpec {
  using Attrs = std::map<std::string, std::string>;
  using AnswerKey = std::pair<std::string, std::vector<std::string>>;

  std::string root;
  std::map<std::string, Attrs> concepts;
  std::map<AnswerKey, std::string> answers;

  bool has_concept(const std::string& id) const { return concepts.count(id) > 0; }

  const std::string* attr(const std::string& concept_id,
                          const std::string& name) const {
    auto c = concepts.find(concept_id);
    if (c == concepts.end()) return nullptr;
    auto a = c->second.find(name);
    return a == c->second.end() ? nullptr : &a->second;
  }

  /// Follows a dotted attribute path from `from`; empty path returns `from`.
  std::optional<std::string> follow(const std::string& from,
                                    const std::string& path) const;
};

using Corpus = std::vector<SemanticSpec>;

/// Oracle backed by a SemanticSpec's answer table.
class TableOracle : public SemanticOracle {
public:
  explicit TableOracle(const SemanticSpec& spec) : spec_(&spec) {}
  std::optional<std::string> answer(
      const std::string& inquiry,
      const std::vector<std::string>& concepts) const override {
    auto it = spec_->answers.find({inquiry, concepts});
    if (it == spec_->answers.end()) return std::nullopt;
    return it->second;
  }

private:
  const SemanticSpec* spec_;
};

}  // namespace sfg
