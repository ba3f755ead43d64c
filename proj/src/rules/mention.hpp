#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cyents {

enum class Provenance { kRule, kModel, kHuman, kLinker };

const char* to_string(Provenance p);
Provenance parse_provenance(std::string_view s);

// A typed span over a document's text, in character offsets [start, end).
struct Mention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;
  Provenance provenance = Provenance::kHuman;
  double score = 1.0;

  bool same_span_and_label(const Mention& o) const {
    return start == o.start && end == o.end && label == o.label;
  }
  bool overlaps(const Mention& o) const { return start < o.end && o.start < end; }

  bool operator==(const Mention&) const = default;
};

// Orders by (start, end, label).
bool mention_less(const Mention& a, const Mention& b);

// Greedy leftmost-longest selection of a non-overlapping subset. Input order
// does not matter; output is sorted by start.
std::vector<Mention> resolve_leftmost_longest(std::vector<Mention> candidates);

}  // namespace cyents
