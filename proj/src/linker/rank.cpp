#include "linker/rank.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "common/error.hpp"
#include "common/strings.hpp"
#include "common/utf8.hpp"

namespace cyents {
namespace {

const std::set<std::string, std::less<>> kStopwords = {
    "a",    "an",   "and",  "are",  "as",   "at",   "be",    "by",   "for",  "from", "has",  "he",
    "in",   "is",   "it",   "its",  "of",   "on",   "or",    "that", "the",  "to",   "was",  "were",
    "will", "with", "this", "which", "who", "also", "been", "but",  "not",  "their", "they", "these"};

}  // namespace

const std::set<std::string, std::less<>>& link_stopwords() { return kStopwords; }

nlohmann::json LinkWeights::to_json() const {
  return {{"match", match}, {"prominence", prominence}, {"context", context}, {"type", type},
          {"nil_threshold", nil_threshold}};
}

LinkWeights LinkWeights::from_json(const nlohmann::json& j) {
  LinkWeights w;
  try {
    w.match = j.value("match", w.match);
    w.prominence = j.value("prominence", w.prominence);
    w.context = j.value("context", w.context);
    w.type = j.value("type", w.type);
    w.nil_threshold = j.value("nil_threshold", w.nil_threshold);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("link weights: ") + e.what());
  }
  return w;
}

std::size_t longest_common_substring(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

double string_match(const std::string& surface, const LinkCandidate& c) {
  const std::string s = fold_case(collapse_whitespace(surface));
  if (s.empty()) return 0.0;
  if (fold_case(collapse_whitespace(c.label)) == s) return 1.0;
  for (const auto& a : c.aliases) {
    if (fold_case(collapse_whitespace(a)) == s) return 0.8;
  }
  double best = 0.0;
  auto consider = [&](const std::string& name) {
    const std::string n = fold_case(collapse_whitespace(name));
    if (n.empty()) return;
    best = std::max(best, static_cast<double>(longest_common_substring(s, n)) / std::max(s.size(), n.size()));
  };
  consider(c.label);
  for (const auto& a : c.aliases) consider(a);
  return best;
}

std::vector<std::string> content_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !kStopwords.count(cur)) out.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    if (is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80) {
      cur.push_back(ascii_lower(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::vector<double> tfidf_cosines(const std::string& query, const std::vector<std::string>& texts) {
  std::vector<std::map<std::string, double>> tf(texts.size() + 1);
  for (const auto& w : content_words(query)) tf[0][w] += 1.0;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    for (const auto& w : content_words(texts[i])) tf[i + 1][w] += 1.0;
  }
  std::map<std::string, double> df;
  for (const auto& doc : tf) {
    for (const auto& [w, n] : doc) df[w] += 1.0;
  }
  const double N = static_cast<double>(tf.size());
  for (auto& doc : tf) {
    for (auto& [w, n] : doc) n *= std::log((1.0 + N) / (1.0 + df[w])) + 1.0;
  }
  auto norm = [](const std::map<std::string, double>& v) {
    double s = 0.0;
    for (const auto& [w, x] : v) s += x * x;
    return std::sqrt(s);
  };
  const double qn = norm(tf[0]);
  std::vector<double> out(texts.size(), 0.0);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const double tn = norm(tf[i + 1]);
    if (qn == 0.0 || tn == 0.0) continue;
    double dot = 0.0;
    for (const auto& [w, x] : tf[0]) {
      const auto it = tf[i + 1].find(w);
      if (it != tf[i + 1].end()) dot += x * it->second;
    }
    out[i] = dot / (qn * tn);
  }
  return out;
}

Ranking rank(const std::string& surface, const std::string& context, const std::vector<LinkCandidate>& candidates,
             const LinkWeights& weights, const std::set<std::string>& relevant_types) {
  Ranking r;
  if (candidates.empty()) return r;
  std::uint64_t max_prom = 0;
  std::vector<std::string> texts;
  for (const auto& c : candidates) {
    max_prom = std::max(max_prom, c.prominence);
    texts.push_back(c.abstract_first_sentence ? c.description + " " + *c.abstract_first_sentence : c.description);
  }
  const auto cosines = tfidf_cosines(context, texts);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ScoredCandidate s;
    s.candidate = candidates[i];
    s.string_match = string_match(surface, candidates[i]);
    s.prominence = max_prom == 0 ? 0.0
                                 : std::log1p(static_cast<double>(candidates[i].prominence)) /
                                       std::log1p(static_cast<double>(max_prom));
    s.context = cosines[i];
    s.type_hit = std::any_of(candidates[i].types.begin(), candidates[i].types.end(),
                             [&](const std::string& t) { return relevant_types.count(t) > 0; })
                     ? 1.0
                     : 0.0;
    s.score = weights.match * s.string_match + weights.prominence * s.prominence + weights.context * s.context +
              weights.type * s.type_hit;
    r.ranked.push_back(std::move(s));
  }
  std::stable_sort(r.ranked.begin(), r.ranked.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return qid_number(a.candidate.qid) < qid_number(b.candidate.qid);
  });
  if (r.ranked.front().score >= weights.nil_threshold) r.decision = r.ranked.front().candidate.qid;
  return r;
}

}  // namespace cyents
