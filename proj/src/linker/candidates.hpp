#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

namespace cyents {

class HttpClient;

struct LinkCandidate {
  std::string qid;
  std::string label;
  std::vector<std::string> aliases;
  std::string description;
  std::vector<std::string> types;  // instance-of and their superclasses
  std::uint64_t prominence = 0;    // sitelink count
  std::optional<std::string> abstract_first_sentence;

  nlohmann::json to_json() const;
  // Throws Error(kClient) on a malformed record.
  static LinkCandidate from_json(const nlohmann::json& j);
  bool operator==(const LinkCandidate&) const = default;
};

bool is_valid_qid(const std::string& qid);
// Numeric part of a Q-id, for ordering.
std::uint64_t qid_number(const std::string& qid);

// Errors are Error(kClient).
class CandidateClient {
 public:
  virtual ~CandidateClient() = default;
  virtual std::vector<LinkCandidate> search(const std::string& surface) = 0;
};

// Recorded responses: manifest.json maps each query string to a file holding
// {"query": ..., "candidates": [...]}. Unrecorded queries are a client error.
class FixtureCandidateClient : public CandidateClient {
 public:
  explicit FixtureCandidateClient(std::string dir);
  std::vector<LinkCandidate> search(const std::string& surface) override;

 private:
  std::string dir_;
  std::map<std::string, std::string> manifest_;
};

// Wikidata action API: wbsearchentities for candidates, then wbgetentities
// for labels, aliases, descriptions, instance-of, sitelinks, and one level
// of subclass-of on the instance-of targets.
class WikidataClient : public CandidateClient {
 public:
  static constexpr const char* kDefaultEndpoint = "https://www.wikidata.org/w/api.php";
  WikidataClient(HttpClient& http, std::string endpoint = kDefaultEndpoint, std::size_t limit = 50);
  std::vector<LinkCandidate> search(const std::string& surface) override;

 private:
  nlohmann::json get_json(const std::string& url);
  HttpClient& http_;
  std::string endpoint_;
  std::size_t limit_;
};

// Remembers results per query; safe to share across threads.
class CachedClient : public CandidateClient {
 public:
  explicit CachedClient(CandidateClient& inner) : inner_(inner) {}
  std::vector<LinkCandidate> search(const std::string& surface) override;

 private:
  CandidateClient& inner_;
  std::shared_mutex mu_;
  std::map<std::string, std::vector<LinkCandidate>> cache_;
};

std::string url_encode(const std::string& s);

}  // namespace cyents
