#pragma once

#include <string_view>
#include <vector>

#include "annotations/annotation_set.hpp"
#include "rules/gazetteer.hpp"
#include "rules/mention.hpp"

namespace cyents {

struct Document;

// Format recognizers: IP_Address (IPv4 dotted quad, bracket-free IPv6), Hash
// (32/40/64 hex digits), Port (after "port "/"ports " or ':' following an
// IPv4 match; digits only), CVE, Email, URL. Output is non-overlapping,
// leftmost-longest, provenance rule, score 1.
std::vector<Mention> match_patterns(std::string_view text);
std::vector<Mention> match_patterns(const Document& doc);

// Union of format and gazetteer matches for one document. Format matches win
// every overlap; remaining gazetteer candidates are resolved leftmost-longest.
// The returned set has annotator "rules" and a single entry for doc.doc_id.
AnnotationSet prepopulate(const Document& doc, const std::vector<Gazetteer>& gazetteers);

// Same resolution, returning only the mention list.
std::vector<Mention> prepopulate_mentions(std::string_view text, const std::vector<Gazetteer>& gazetteers);

}  // namespace cyents
