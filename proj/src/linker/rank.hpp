#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "linker/candidates.hpp"

namespace cyents {

struct LinkWeights {
  double match = 0.4;
  double prominence = 0.2;
  double context = 0.3;
  double type = 0.1;
  double nil_threshold = 0.35;

  nlohmann::json to_json() const;
  static LinkWeights from_json(const nlohmann::json& j);
};

struct ScoredCandidate {
  LinkCandidate candidate;
  double string_match = 0.0;
  double prominence = 0.0;  // log(1+p) / log(1+max p)
  double context = 0.0;     // tf-idf cosine
  double type_hit = 0.0;    // 0 or 1
  double score = 0.0;
};

struct Ranking {
  std::vector<ScoredCandidate> ranked;  // score descending, then Q-number ascending
  std::optional<std::string> decision;  // top Q-id, or none for NIL
};

// 1.0 for an exact (case-folded) label, 0.8 for an exact alias, otherwise the
// longest common substring over max length, best over label and aliases.
double string_match(const std::string& surface, const LinkCandidate& c);

// Length of the longest common substring, in bytes.
std::size_t longest_common_substring(const std::string& a, const std::string& b);

const std::set<std::string, std::less<>>& link_stopwords();

// Lower-cased alphanumeric words minus stopwords.
std::vector<std::string> content_words(const std::string& text);

// Cosine of tf-idf vectors of `query` and each text; idf is computed over
// the texts plus the query as ln((1+N)/(1+df)) + 1.
std::vector<double> tfidf_cosines(const std::string& query, const std::vector<std::string>& texts);

Ranking rank(const std::string& surface, const std::string& context, const std::vector<LinkCandidate>& candidates,
             const LinkWeights& weights, const std::set<std::string>& relevant_types);

}  // namespace cyents
