#pragma once

#include <map>
#include <string>
#include <vector>

#include "rules/mention.hpp"

namespace cyents {

// One annotator's (or one pipeline stage's) mentions over a document
// collection. Per-document mention lists are kept sorted and non-overlapping.
struct AnnotationSet {
  std::string annotator_id;
  std::map<std::string, std::vector<Mention>> entries;

  std::size_t mention_count() const;

  bool operator==(const AnnotationSet&) const = default;
};

}  // namespace cyents
