#include "doctest.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "ingest/http.hpp"
#include "linker/candidates.hpp"
#include "linker/link.hpp"
#include "support/link_oracle.hpp"
#include "text/document.hpp"

using namespace cyents;

namespace {

const std::string kWikidata = std::string(CYENTS_FIXTURES) + "/wikidata";
const std::string kContext = "Lazarus was behind the WannaCry attack";

std::set<std::string> relevant() { return LinkerConfig::load_relevant_types(std::string(CYENTS_DATA) + "/linker/relevant_types.json"); }

std::vector<LinkCandidate> lazarus() {
  FixtureCandidateClient client(kWikidata);
  return client.search("Lazarus");
}

std::vector<std::string> qids(const Ranking& r) {
  std::vector<std::string> out;
  for (const auto& s : r.ranked) out.push_back(s.candidate.qid);
  return out;
}

std::vector<testing::OracleCandidate> to_oracle(const std::vector<LinkCandidate>& cs, const std::set<std::string>& types) {
  std::vector<testing::OracleCandidate> out;
  for (const auto& c : cs) {
    bool hit = false;
    for (const auto& t : c.types) hit = hit || types.count(t);
    out.push_back({c.label, c.aliases, c.abstract_first_sentence ? c.description + " " + *c.abstract_first_sentence : c.description,
                   static_cast<double>(c.prominence), hit});
  }
  return out;
}

std::set<std::string> oracle_stop() {
  const auto& s = link_stopwords();
  return {s.begin(), s.end()};
}

class CountingClient : public CandidateClient {
 public:
  explicit CountingClient(CandidateClient& inner) : inner_(inner) {}
  std::vector<LinkCandidate> search(const std::string& surface) override {
    ++calls;
    return inner_.search(surface);
  }
  std::atomic<int> calls{0};

 private:
  CandidateClient& inner_;
};

LinkCandidate candidate(std::string qid, std::string label, std::uint64_t prominence, std::string description = "") {
  LinkCandidate c;
  c.qid = std::move(qid);
  c.label = std::move(label);
  c.prominence = prominence;
  c.description = std::move(description);
  return c;
}

}  // namespace

TEST_CASE("qid helpers") {
  CHECK(is_valid_qid("Q19284445"));
  CHECK_FALSE(is_valid_qid("Q"));
  CHECK_FALSE(is_valid_qid("Q012"));
  CHECK_FALSE(is_valid_qid("P31"));
  CHECK_FALSE(is_valid_qid("Q12a"));
  CHECK(qid_number("Q10") == 10);
}

TEST_CASE("candidate json") {
  const auto c = lazarus().front();
  CHECK(LinkCandidate::from_json(c.to_json()) == c);
  CHECK_THROWS_AS(LinkCandidate::from_json({{"qid", "X1"}}), Error);
  CHECK_THROWS_AS(LinkCandidate::from_json({{"qid", "Q1"}, {"prominence", -3}}), Error);
  CHECK_THROWS_AS(LinkCandidate::from_json({{"label", "x"}}), Error);
}

TEST_CASE("fixture candidate search") {
  FixtureCandidateClient client(kWikidata);
  const auto cs = client.search("Lazarus");
  CHECK(cs.size() >= 20);
  CHECK(cs.size() <= 50);
  CHECK(std::any_of(cs.begin(), cs.end(), [](const LinkCandidate& c) { return c.qid == "Q19284445"; }));
  CHECK(client.search("zzqqxx-nonexistent").empty());
  auto code_of = [&](const std::string& q) {
    try {
      client.search(q);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  CHECK(code_of("Broken") == ErrorCode::kClient);
  CHECK(code_of("never recorded") == ErrorCode::kClient);
  CHECK_THROWS_AS(FixtureCandidateClient("/nonexistent/fixtures"), Error);
}

TEST_CASE("Lazarus in a WannaCry context resolves to the hacker group") {
  const auto r = rank("Lazarus", kContext, lazarus(), LinkWeights{}, relevant());
  REQUIRE(!r.ranked.empty());
  CHECK(r.ranked.front().candidate.qid == "Q19284445");
  REQUIRE(r.decision);
  CHECK(*r.decision == "Q19284445");
  // Without the context the most prominent exact-label item wins.
  const auto bare = rank("Lazarus", "", lazarus(), LinkWeights{}, relevant());
  CHECK(bare.ranked.front().candidate.qid != "Q19284445");
}

TEST_CASE("ranked scores agree with the independent oracle") {
  const double w[4] = {0.4, 0.2, 0.3, 0.1};
  SUBCASE("single exact-label candidate in a relevant type") {
    auto c = candidate("Q19284445", "Lazarus Group", 46, "North Korean hacking organization");
    c.types = {"Q1120595"};
    c.abstract_first_sentence = "Blamed for the WannaCry ransomware attack.";
    const auto r = rank("lazarus  group", kContext, {c}, LinkWeights{}, relevant());
    const auto o = testing::oracle_scores("lazarus  group", kContext, to_oracle({c}, relevant()), w, oracle_stop());
    REQUIRE(r.ranked.size() == 1);
    CHECK(std::abs(r.ranked[0].string_match - 1.0) < 1e-9);
    CHECK(std::abs(r.ranked[0].prominence - 1.0) < 1e-9);
    CHECK(std::abs(r.ranked[0].type_hit - 1.0) < 1e-9);
    CHECK(std::abs(r.ranked[0].context - o[0].ctx) < 1e-9);
    CHECK(std::abs(r.ranked[0].score - o[0].total) < 1e-9);
  }
  SUBCASE("every Lazarus fixture candidate") {
    const auto cs = lazarus();
    const auto o = testing::oracle_scores("Lazarus", kContext, to_oracle(cs, relevant()), w, oracle_stop());
    const auto r = rank("Lazarus", kContext, cs, LinkWeights{}, relevant());
    for (const auto& s : r.ranked) {
      const auto i = static_cast<std::size_t>(
          std::find_if(cs.begin(), cs.end(), [&](const LinkCandidate& c) { return c.qid == s.candidate.qid; }) - cs.begin());
      REQUIRE(i < cs.size());
      CHECK(std::abs(s.string_match - o[i].match) < 1e-9);
      CHECK(std::abs(s.prominence - o[i].prom) < 1e-9);
      CHECK(std::abs(s.context - o[i].ctx) < 1e-9);
      CHECK(std::abs(s.type_hit - o[i].type) < 1e-9);
      CHECK(std::abs(s.score - o[i].total) < 1e-9);
    }
  }
}

TEST_CASE("string_match tiers") {
  auto c = candidate("Q1", "Lazarus Group", 0);
  c.aliases = {"Hidden Cobra"};
  CHECK(string_match("LAZARUS GROUP", c) == 1.0);
  CHECK(string_match("hidden cobra", c) == 0.8);
  CHECK(string_match("Lazarus", c) == doctest::Approx(7.0 / 13.0));
  CHECK(string_match("", c) == 0.0);
  CHECK(longest_common_substring("abcdef", "zcdez") == 3);
}

TEST_CASE("ranking is sorted and NIL below threshold") {
  const auto r = rank("Lazarus", kContext, lazarus(), LinkWeights{}, relevant());
  for (std::size_t i = 1; i < r.ranked.size(); ++i) CHECK(r.ranked[i - 1].score >= r.ranked[i].score);
  LinkWeights strict;
  strict.nil_threshold = 0.99;
  const auto nil = rank("Lazarus", kContext, lazarus(), strict, relevant());
  CHECK_FALSE(nil.decision);
  CHECK(qids(nil) == qids(r));
  CHECK_FALSE(rank("Lazarus", kContext, {}, LinkWeights{}, relevant()).decision);
}

TEST_CASE("ranking is deterministic under input permutation") {
  const auto base = rank("Lazarus", kContext, lazarus(), LinkWeights{}, relevant());
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto cs = lazarus();
    rng.shuffle(cs);
    const auto r = rank("Lazarus", kContext, cs, LinkWeights{}, relevant());
    CHECK(qids(r) == qids(base));
    for (std::size_t i = 0; i < r.ranked.size(); ++i) CHECK(r.ranked[i].score == base.ranked[i].score);
  }
}

TEST_CASE("equal scores break ties by ascending numeric qid") {
  const std::vector<LinkCandidate> cs = {candidate("Q100", "x", 1), candidate("Q9", "x", 1), candidate("Q20", "x", 1)};
  CHECK(qids(rank("x", "", cs, LinkWeights{}, {})) == std::vector<std::string>{"Q9", "Q20", "Q100"});
}

TEST_CASE("score is monotone in prominence") {
  const auto base_cs = lazarus();
  for (std::size_t k = 0; k < base_cs.size(); ++k) {
    double prev_score = -1.0;
    std::size_t prev_pos = base_cs.size();
    for (std::uint64_t p : {0ULL, 1ULL, 5ULL, 30ULL, 92ULL, 500ULL}) {
      auto cs = base_cs;
      cs[k].prominence = p;
      const auto r = rank("Lazarus", kContext, cs, LinkWeights{}, relevant());
      const auto pos = static_cast<std::size_t>(
          std::find_if(r.ranked.begin(), r.ranked.end(),
                       [&](const ScoredCandidate& s) { return s.candidate.qid == cs[k].qid; }) -
          r.ranked.begin());
      CHECK(r.ranked[pos].score >= prev_score);
      CHECK(pos <= prev_pos);
      prev_score = r.ranked[pos].score;
      prev_pos = pos;
    }
  }
}

TEST_CASE("with only the match weight the top candidate has maximal string_match") {
  LinkWeights w{1.0, 0.0, 0.0, 0.0, 0.0};
  Rng rng(5);
  const std::vector<std::string> names = {"Lazarus", "Lazarus Group", "lazarus", "Lazar", "Group", "Hidden Cobra", "APT38", "Cobra"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LinkCandidate> cs;
    const std::size_t n = 1 + rng.below(8);
    for (std::size_t i = 0; i < n; ++i) {
      auto c = candidate("Q" + std::to_string(1 + rng.below(1000)), names[rng.below(names.size())], rng.below(100),
                         rng.below(2) ? "hacking group" : "song");
      if (rng.below(2)) c.aliases.push_back(names[rng.below(names.size())]);
      cs.push_back(c);
    }
    const std::string surface = names[rng.below(names.size())];
    const auto r = rank(surface, kContext, cs, w, {});
    double best = 0.0;
    for (const auto& c : cs) best = std::max(best, string_match(surface, c));
    CHECK(r.ranked.front().string_match == best);
  }
}

TEST_CASE("tfidf cosine") {
  CHECK(tfidf_cosines("", {"abc"})[0] == 0.0);
  CHECK(tfidf_cosines("wannacry attack", {"wannacry attack"})[0] == doctest::Approx(1.0));
  CHECK(tfidf_cosines("wannacry", {"song by Bowie"})[0] == 0.0);
  CHECK(content_words("The WannaCry attack, of 2017.") == std::vector<std::string>{"wannacry", "attack", "2017"});
}

TEST_CASE("link_document") {
  FixtureCandidateClient fixtures(kWikidata);
  LinkerConfig config;
  config.relevant_types = relevant();
  const Document doc = make_document("d1",
                                     "Analysts met in March. Lazarus was behind the WannaCry attack. "
                                     "The hash 44d88612fea8a8f36de82e1278abb02f was shared. Windows hosts were hit.");
  SUBCASE("one threat actor mention") {
    const auto res = link_document(doc, {{23, 30, "Threat_Actor", Provenance::kModel, 0.9}}, fixtures, config);
    REQUIRE(res.size() == 1);
    CHECK(res[0].surface == "Lazarus");
    CHECK(res[0].status == LinkStatus::kLinked);
    const auto direct = rank("Lazarus", mention_context(doc, res[0].mention), fixtures.search("Lazarus"),
                             config.weights, config.relevant_types);
    CHECK(qids(res[0].ranking) == qids(direct));
    const auto j = res[0].link_json(3);
    CHECK(j["qid"] == *direct.decision);
    CHECK(j["status"] == "linked");
    CHECK(j["alternatives"].size() == 3);
  }
  SUBCASE("context is the sentence and its neighbours") {
    CHECK(mention_context(doc, {23, 30, "Threat_Actor"}) ==
          "Analysts met in March. Lazarus was behind the WannaCry attack. "
          "The hash 44d88612fea8a8f36de82e1278abb02f was shared.");
    CHECK(mention_context(doc, {0, 8, "ORG"}) == "Analysts met in March. Lazarus was behind the WannaCry attack.");
  }
  SUBCASE("hash mentions are not linkable") {
    const auto res = link_document(doc, {{72, 104, "Hash"}}, fixtures, config);
    REQUIRE(res.size() == 1);
    CHECK(res[0].status == LinkStatus::kNotLinkable);
    CHECK(res[0].link_json(5)["qid"].is_null());
  }
  SUBCASE("a failing mention is recorded and the batch continues") {
    const std::vector<Mention> ms = {{23, 30, "Threat_Actor"}, {0, 8, "ORG"}, {117, 124, "Operating_System"}};
    const auto res = link_document(doc, ms, fixtures, config);
    REQUIRE(res.size() == 3);
    CHECK(res[0].status == LinkStatus::kLinked);
    CHECK(res[1].status == LinkStatus::kError);
    CHECK(!res[1].error.empty());
    CHECK(res[2].surface == "Windows");
    CHECK(res[2].status == LinkStatus::kLinked);
    const auto rec = linked_record("d1", "model", res, 2);
    CHECK(rec["spans"].size() == 3);
    CHECK(rec["spans"][0]["start"] == 23);
    CHECK(rec["spans"][1]["link"]["status"] == "error");
  }
}

TEST_CASE("cached client") {
  FixtureCandidateClient fixtures(kWikidata);
  CountingClient counting(fixtures);
  CachedClient cached(counting);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&] {
      for (int i = 0; i < 50; ++i) CHECK(cached.search("Lazarus").size() == 50);
    });
  for (auto& t : threads) t.join();
  CHECK(counting.calls >= 1);
  CHECK(counting.calls <= 4);
  CHECK_THROWS_AS(cached.search("Broken"), Error);
}

TEST_CASE("wikidata client against recorded API responses") {
  FixtureHttpClient http(std::string(CYENTS_FIXTURES) + "/wikidata_api");
  WikidataClient client(http, "https://wikidata.test/w/api.php", 3);
  const auto cs = client.search("Lazarus");
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].qid == "Q19284445");
  CHECK(cs[0].label == "Lazarus Group");
  CHECK(cs[0].aliases == std::vector<std::string>{"Lazarus", "Hidden Cobra"});
  CHECK(cs[0].types == std::vector<std::string>{"Q1120595", "Q43229"});
  CHECK(cs[0].prominence == 4);
  CHECK(cs[1].types == std::vector<std::string>{"Q5"});
  CHECK(cs[1].prominence == 6);
  CHECK(client.search("zzqqxx-nonexistent").empty());
  for (const char* q : {"Garbage", "unrecorded"}) {
    try {
      client.search(q);
      FAIL("expected a client error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kClient);
    }
  }
  CHECK(url_encode("a b|c") == "a%20b%7Cc");
}
