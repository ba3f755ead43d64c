#include "text/document.hpp"

#include "common/error.hpp"
#include "common/utf8.hpp"

namespace cyents {

std::size_t Document::length() const { return utf8_length(text); }

void Document::validate() const {
  auto fail = [&](const std::string& why) { throw Error(ErrorCode::kValidation, "document " + doc_id + ": " + why); };
  if (text.find_first_of("\r\n") != std::string::npos) fail("text contains a newline");
  const std::size_t n = length();
  std::size_t prev_end = 0;
  for (const auto& s : sentences) {
    if (s.start >= s.end || s.end > n) fail("sentence range out of bounds");
    if (s.start < prev_end) fail("sentence ranges overlap or are unsorted");
    prev_end = s.end;
  }
  std::size_t next = 0;
  for (const auto& p : paragraphs) {
    if (p.first != next || p.last <= p.first) fail("paragraphs do not partition the sentences");
    next = p.last;
  }
  if (next != sentences.size()) fail("paragraphs do not cover every sentence");
}

nlohmann::json Document::to_json() const {
  nlohmann::json j;
  j["doc_id"] = doc_id;
  j["text"] = text;
  if (source_url) j["source_url"] = *source_url;
  auto& s = j["sentences"] = nlohmann::json::array();
  for (const auto& r : sentences) s.push_back({r.start, r.end});
  auto& p = j["paragraphs"] = nlohmann::json::array();
  for (const auto& r : paragraphs) p.push_back({r.first, r.last});
  return j;
}

Document Document::from_json(const nlohmann::json& j) {
  Document d;
  try {
    d.doc_id = j.at("doc_id").get<std::string>();
    d.text = j.at("text").get<std::string>();
    if (j.contains("source_url") && !j["source_url"].is_null()) d.source_url = j["source_url"].get<std::string>();
    for (const auto& r : j.value("sentences", nlohmann::json::array()))
      d.sentences.push_back({r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()});
    for (const auto& r : j.value("paragraphs", nlohmann::json::array()))
      d.paragraphs.push_back({r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed document: ") + e.what());
  }
  d.validate();
  return d;
}

Document make_document(std::string doc_id, std::string_view text, std::optional<std::string> source_url,
                       const TextTilingParams& params) {
  Document d;
  d.doc_id = std::move(doc_id);
  d.text.assign(text);
  for (char& c : d.text)
    if (c == '\n' || c == '\r') c = ' ';
  d.source_url = std::move(source_url);
  d.sentences = split_sentences(d.text);
  d.paragraphs = segment_paragraphs(d, params);
  return d;
}

}  // namespace cyents
