#pragma once

#include <set>
#include <string>
#include <vector>

#include "annotations/annotation_set.hpp"
#include "linker/rank.hpp"
#include "text/document.hpp"

namespace cyents {

struct LinkerConfig {
  LinkWeights weights;
  std::set<std::string> linkable_labels = {"Threat_Actor", "Malware_Name", "Software_Name",
                                           "Operating_System", "Campaign", "ORG",
                                           "GPE", "PERSON", "Programming_Language", "Protocol"};
  std::set<std::string> relevant_types;
  std::size_t alternatives = 5;

  // relevant_types.json: {"types": [{"qid": ..., ...}]}.
  static std::set<std::string> load_relevant_types(const std::string& path);
};

enum class LinkStatus { kLinked, kNil, kNotLinkable, kError };
const char* to_string(LinkStatus s);

struct LinkResult {
  Mention mention;
  std::string surface;
  LinkStatus status = LinkStatus::kNil;
  Ranking ranking;
  std::string error;

  // {"qid": str|null, "score": float, "status": str, "alternatives": [{"qid","label","score"}]}
  nlohmann::json link_json(std::size_t alternatives) const;
};

// Context for a mention: its sentence and one sentence either side.
std::string mention_context(const Document& doc, const Mention& m);

// One result per mention, in input order. Client failures become kError
// results and do not stop the batch.
std::vector<LinkResult> link_document(const Document& doc, const std::vector<Mention>& mentions,
                                      CandidateClient& client, const LinkerConfig& config);

// One JSONL record: the span schema with a "link" object added to each span.
nlohmann::json linked_record(const std::string& doc_id, const std::string& annotator,
                             const std::vector<LinkResult>& results, std::size_t alternatives);

}  // namespace cyents
