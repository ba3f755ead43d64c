#include "linker/link.hpp"

#include "annotations/io.hpp"
#include "common/error.hpp"
#include "common/strings.hpp"
#include "common/utf8.hpp"
#include "spdlog/spdlog.h"

namespace cyents {

std::set<std::string> LinkerConfig::load_relevant_types(const std::string& path) {
  std::set<std::string> out;
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    for (const auto& t : j.at("types")) out.insert(t.at("qid").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
  return out;
}

const char* to_string(LinkStatus s) {
  switch (s) {
    case LinkStatus::kLinked: return "linked";
    case LinkStatus::kNil: return "nil";
    case LinkStatus::kNotLinkable: return "not_linkable";
    case LinkStatus::kError: return "error";
  }
  return "error";
}

nlohmann::json LinkResult::link_json(std::size_t alternatives) const {
  nlohmann::json alts = nlohmann::json::array();
  for (std::size_t i = 0; i < ranking.ranked.size() && i < alternatives; ++i) {
    const auto& s = ranking.ranked[i];
    alts.push_back({{"qid", s.candidate.qid}, {"label", s.candidate.label}, {"score", s.score}});
  }
  nlohmann::json j = {{"qid", ranking.decision ? nlohmann::json(*ranking.decision) : nlohmann::json()},
                      {"score", ranking.ranked.empty() ? 0.0 : ranking.ranked.front().score},
                      {"status", to_string(status)},
                      {"alternatives", alts}};
  if (status == LinkStatus::kError) j["error"] = error;
  return j;
}

std::string mention_context(const Document& doc, const Mention& m) {
  const auto& ss = doc.sentences;
  std::size_t k = 0;
  while (k < ss.size() && ss[k].end <= m.start) ++k;
  if (k == ss.size()) return utf8_substr(doc.text, m.start, m.end);
  const std::size_t first = k == 0 ? 0 : k - 1;
  const std::size_t last = std::min(ss.size() - 1, k + 1);
  return utf8_substr(doc.text, ss[first].start, ss[last].end);
}

std::vector<LinkResult> link_document(const Document& doc, const std::vector<Mention>& mentions,
                                      CandidateClient& client, const LinkerConfig& config) {
  std::vector<LinkResult> out;
  for (const auto& m : mentions) {
    LinkResult r;
    r.mention = m;
    r.surface = utf8_substr(doc.text, m.start, m.end);
    if (!config.linkable_labels.count(m.label)) {
      r.status = LinkStatus::kNotLinkable;
      out.push_back(std::move(r));
      continue;
    }
    try {
      const auto candidates = client.search(r.surface);
      r.ranking = rank(r.surface, mention_context(doc, m), candidates, config.weights, config.relevant_types);
      r.status = r.ranking.decision ? LinkStatus::kLinked : LinkStatus::kNil;
    } catch (const Error& e) {
      spdlog::warn("{}: linking '{}' failed: {}", doc.doc_id, r.surface, e.what());
      r.status = LinkStatus::kError;
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json linked_record(const std::string& doc_id, const std::string& annotator,
                             const std::vector<LinkResult>& results, std::size_t alternatives) {
  nlohmann::json spans = nlohmann::json::array();
  for (const auto& r : results) {
    auto j = mention_to_json(r.mention);
    j["link"] = r.link_json(alternatives);
    spans.push_back(std::move(j));
  }
  return {{"doc_id", doc_id}, {"annotator", annotator}, {"spans", spans}};
}

}  // namespace cyents
