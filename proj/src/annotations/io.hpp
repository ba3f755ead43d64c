#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annotations/annotation_set.hpp"
#include "common/error.hpp"
#include "json.hpp"

namespace cyents {

class Schema;

// What a loaded or submitted span list is checked against. Either pointer may
// be null to skip that check.
struct SpanChecks {
  const Schema* schema = nullptr;
  const std::map<std::string, std::size_t>* doc_lengths = nullptr;  // doc_id -> length in characters
};

// One reason per offending span, empty when the list is valid. Input order
// is irrelevant; overlap is checked after sorting.
struct SpanProblem {
  std::size_t index;  // position in the input list
  ErrorCode code;
  std::string reason;
};
std::vector<SpanProblem> check_spans(const std::vector<Mention>& spans, std::optional<std::size_t> doc_length,
                                     const Schema* schema);

nlohmann::json mention_to_json(const Mention& m);
Mention mention_from_json(const nlohmann::json& j);

nlohmann::json spans_to_json(const std::vector<Mention>& spans);
std::vector<Mention> spans_from_json(const nlohmann::json& j);

// Throws LineError with ParseError, SpanOutOfBounds, UnknownLabel or
// OverlappingSpans. Lines must share one annotator id; blank lines are skipped.
AnnotationSet parse_jsonl(std::string_view contents, const SpanChecks& checks = {});
AnnotationSet load_jsonl(const std::string& path, const SpanChecks& checks = {});

std::string to_jsonl(const AnnotationSet& set);
void save_jsonl(const AnnotationSet& set, const std::string& path);

}  // namespace cyents
