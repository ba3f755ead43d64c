#include "rules/mention.hpp"

#include <algorithm>
#include <tuple>

#include "common/error.hpp"

namespace cyents {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kRule: return "rule";
    case Provenance::kModel: return "model";
    case Provenance::kHuman: return "human";
    case Provenance::kLinker: return "linker";
  }
  return "?";
}

Provenance parse_provenance(std::string_view s) {
  if (s == "rule") return Provenance::kRule;
  if (s == "model") return Provenance::kModel;
  if (s == "human") return Provenance::kHuman;
  if (s == "linker") return Provenance::kLinker;
  throw Error(ErrorCode::kParse, "unknown provenance '" + std::string(s) + "'");
}

bool mention_less(const Mention& a, const Mention& b) {
  return std::tie(a.start, a.end, a.label) < std::tie(b.start, b.end, b.label);
}

std::vector<Mention> resolve_leftmost_longest(std::vector<Mention> candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const Mention& a, const Mention& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;
    return a.label < b.label;
  });
  std::vector<Mention> out;
  for (auto& m : candidates) {
    if (!out.empty() && m.start < out.back().end) continue;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace cyents
