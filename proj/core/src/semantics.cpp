#include "sfg/semantics.hpp"

namespace sfg {

std::optional<std::string> SemanticSpec::follow(const std::string& from,
                                                const std::string& path) const {
  std::string current = from;
  size_t pos = 0;
  while (pos < path.size()) {
    size_t dot = path.find('.', pos);
    if (dot == std::string::npos) dot = path.size();
    std::string step = path.substr(pos, dot - pos);
    if (!step.empty()) {
      const std::string* next = attr(current, step);
      if (!next) return std::nullopt;
      current = *next;
    }
    pos = dot + 1;
  }
  return current;
}

}  // namespace sfg
