#include "annotations/io.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "common/strings.hpp"
#include "schema/schema.hpp"

namespace cyents {

std::size_t AnnotationSet::mention_count() const {
  std::size_t n = 0;
  for (const auto& [doc, ms] : entries) n += ms.size();
  return n;
}

std::vector<SpanProblem> check_spans(const std::vector<Mention>& spans, std::optional<std::size_t> doc_length,
                                     const Schema* schema) {
  std::vector<SpanProblem> problems;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& m = spans[i];
    if (m.start >= m.end) {
      problems.push_back({i, ErrorCode::kSpanOutOfBounds, "empty or inverted span"});
    } else if (doc_length && m.end > *doc_length) {
      problems.push_back({i, ErrorCode::kSpanOutOfBounds,
                          "span end " + std::to_string(m.end) + " exceeds text length " + std::to_string(*doc_length)});
    }
    if (schema && !schema->contains(m.label)) {
      problems.push_back({i, ErrorCode::kUnknownLabel, "label " + m.label + " is not in schema " +
                                                           std::string(to_string(schema->id()))});
    }
  }
  std::vector<std::size_t> order(spans.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mention_less(spans[a], spans[b]); });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = spans[order[k - 1]];
    const auto& cur = spans[order[k]];
    if (cur.start < prev.end) {
      problems.push_back({order[k], ErrorCode::kOverlappingSpans,
                          "overlaps [" + std::to_string(prev.start) + "," + std::to_string(prev.end) + ")"});
    }
  }
  std::stable_sort(problems.begin(), problems.end(),
                   [](const SpanProblem& a, const SpanProblem& b) { return a.index < b.index; });
  return problems;
}

nlohmann::json mention_to_json(const Mention& m) {
  nlohmann::json j = {{"start", m.start}, {"end", m.end}, {"label", m.label}, {"provenance", to_string(m.provenance)}};
  if (m.provenance == Provenance::kModel) j["score"] = m.score;
  return j;
}

Mention mention_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "span is not an object");
  Mention m;
  try {
    const auto start = j.at("start").get<long long>();
    const auto end = j.at("end").get<long long>();
    if (start < 0 || end < 0) throw Error(ErrorCode::kSpanOutOfBounds, "negative offset");
    m.start = static_cast<std::size_t>(start);
    m.end = static_cast<std::size_t>(end);
    m.label = j.at("label").get<std::string>();
    m.provenance = j.contains("provenance") ? parse_provenance(j["provenance"].get<std::string>()) : Provenance::kHuman;
    if (j.contains("score")) m.score = j["score"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad span: ") + e.what());
  }
  return m;
}

nlohmann::json spans_to_json(const std::vector<Mention>& spans) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : spans) arr.push_back(mention_to_json(m));
  return arr;
}

std::vector<Mention> spans_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "spans is not an array");
  std::vector<Mention> out;
  for (const auto& s : j) out.push_back(mention_from_json(s));
  return out;
}

AnnotationSet parse_jsonl(std::string_view contents, const SpanChecks& checks) {
  AnnotationSet set;
  bool have_annotator = false;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(contents)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    std::string doc_id, annotator;
    std::vector<Mention> spans;
    try {
      j = nlohmann::json::parse(line);
      doc_id = j.at("doc_id").get<std::string>();
      annotator = j.at("annotator").get<std::string>();
      spans = spans_from_json(j.at("spans"));
    } catch (const nlohmann::json::exception& e) {
      throw LineError(ErrorCode::kParse, line_no, e.what());
    } catch (const Error& e) {
      throw LineError(e.code(), line_no, e.what());
    }
    if (!have_annotator) {
      set.annotator_id = annotator;
      have_annotator = true;
    } else if (annotator != set.annotator_id) {
      throw LineError(ErrorCode::kParse, line_no, "annotator " + annotator + " differs from " + set.annotator_id);
    }
    if (set.entries.count(doc_id)) throw LineError(ErrorCode::kParse, line_no, "duplicate doc_id " + doc_id);

    std::optional<std::size_t> length;
    if (checks.doc_lengths) {
      const auto it = checks.doc_lengths->find(doc_id);
      if (it == checks.doc_lengths->end()) throw LineError(ErrorCode::kDocMismatch, line_no, "unknown doc_id " + doc_id);
      length = it->second;
    }
    const auto problems = check_spans(spans, length, checks.schema);
    if (!problems.empty()) {
      const auto& p = problems.front();
      throw LineError(p.code, line_no, "span " + std::to_string(p.index) + ": " + p.reason);
    }
    std::sort(spans.begin(), spans.end(), mention_less);
    set.entries.emplace(std::move(doc_id), std::move(spans));
  }
  return set;
}

AnnotationSet load_jsonl(const std::string& path, const SpanChecks& checks) {
  return parse_jsonl(read_file(path), checks);
}

std::string to_jsonl(const AnnotationSet& set) {
  std::string out;
  for (const auto& [doc_id, spans] : set.entries) {
    nlohmann::json j = {{"doc_id", doc_id}, {"annotator", set.annotator_id}, {"spans", spans_to_json(spans)}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_jsonl(const AnnotationSet& set, const std::string& path) { write_file_atomic(path, to_jsonl(set)); }

}  // namespace cyents
