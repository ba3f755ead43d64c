#include "doctest.h"

#include "common/error.hpp"
#include "rules/aho_corasick.hpp"
#include "rules/gazetteer.hpp"
#include "rules/patterns.hpp"
#include "schema/schema.hpp"
#include "support/oracles.hpp"
#include "text/document.hpp"

using namespace cyents;

namespace {

std::vector<std::pair<std::string, std::string>> labelled(const std::string& text, const std::vector<Mention>& ms) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& m : ms) out.emplace_back(m.label, utf8_substr(text, m.start, m.end));
  return out;
}

using Pairs = std::vector<std::pair<std::string, std::string>>;

}  // namespace

TEST_CASE("aho-corasick reports every occurrence") {
  AhoCorasick ac({"he", "she", "his", "hers"});
  const auto hits = ac.find_all("ushers");
  std::set<std::pair<std::size_t, std::size_t>> got;
  for (const auto& h : hits) got.insert({h.end, h.pattern});
  CHECK(got == std::set<std::pair<std::size_t, std::size_t>>{{4, 1}, {4, 0}, {6, 3}});
  CHECK(ac.accepts("hers"));
  CHECK_FALSE(ac.accepts("her"));
  CHECK_FALSE(ac.accepts(""));
}

TEST_CASE("compile_gazetteer") {
  CHECK(Gazetteer::compile("Protocol", {"HTTP", "HTTPS", "DNS"}).entries().size() == 3);
  CHECK(Gazetteer::compile("Protocol", {"http", "HTTP"}).entries() == std::vector<std::string>{"http"});
  CHECK(Gazetteer::compile("Operating_System", {"Mac   OS\tX"}).entries() == std::vector<std::string>{"mac os x"});
  try {
    Gazetteer::compile("Protocol", {});
    FAIL("expected EmptyGazetteer");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyGazetteer);
  }
  CHECK_THROWS_AS(Gazetteer::compile("Protocol", {"  ", ""}), Error);
}

TEST_CASE("automaton accepts exactly the entry set") {
  const auto g = Gazetteer::compile("Protocol", {"HTTP", "HTTPS", "DNS", "SMBv1"});
  for (const auto& e : g.entries()) CHECK(g.automaton().accepts(e));
  for (auto s : {"htt", "httpss", "dn", "smb", ""}) CHECK_FALSE(g.automaton().accepts(s));
}

TEST_CASE("match_gazetteer examples") {
  const auto os = Gazetteer::compile("Operating_System", {"windows", "mac os", "mac os x"});
  auto m = os.match("targets Windows systems");
  REQUIRE(m.size() == 1);
  CHECK(m[0].start == 8);
  CHECK(m[0].end == 15);
  CHECK(m[0].label == "Operating_System");
  CHECK(m[0].provenance == Provenance::kRule);
  CHECK(m[0].score == 1.0);

  CHECK(os.match("Windowsill").empty());

  m = os.match("Mac OS X");
  REQUIRE(m.size() == 1);
  CHECK(m[0].start == 0);
  CHECK(m[0].end == 8);
}

TEST_CASE("gazetteer matches agree with the brute-force oracle") {
  const auto& entries = testing::oracle_gazetteer_entries();
  const auto g = Gazetteer::compile("Operating_System", {entries.begin(), entries.end()});
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::string text = testing::random_gazetteer_text(rng, 300);
    std::vector<testing::SpanLabel> got;
    for (const auto& m : g.match(text)) got.push_back({m.start, m.end, m.label});
    CHECK(got == testing::brute_force_gazetteer(text, entries, "Operating_System"));
  }
}

TEST_CASE("match_patterns examples") {
  CHECK(labelled("CVE-2021-44228", match_patterns("CVE-2021-44228")) == Pairs{{"CVE", "CVE-2021-44228"}});
  CHECK(match_patterns("999.1.1.1").empty());
  CHECK(labelled("d41d8cd98f00b204e9800998ecf8427e", match_patterns("d41d8cd98f00b204e9800998ecf8427e")) ==
        Pairs{{"Hash", "d41d8cd98f00b204e9800998ecf8427e"}});
  const std::string port = "listens on port 443";
  const auto pm = match_patterns(port);
  REQUIRE(pm.size() == 1);
  CHECK(pm[0].label == "Port");
  CHECK(pm[0].start == 16);
  CHECK(pm[0].end == 19);
}

TEST_CASE("match_patterns offsets are character offsets") {
  const std::string text = "Ünïcode — 10.0.0.1";
  const auto m = match_patterns(text);
  REQUIRE(m.size() == 1);
  CHECK(m[0].start == 10);
  CHECK(m[0].end == 18);
}

TEST_CASE("regex fixture agreement") {
  const auto cases = testing::load_regex_cases(std::string(CYENTS_FIXTURES) + "/regex_cases.tsv");
  REQUIRE(cases.size() == 200);
  for (const auto& c : cases) {
    std::multiset<std::pair<std::string, std::string>> got;
    for (auto& p : labelled(c.text, match_patterns(c.text))) got.insert(p);
    INFO(c.text);
    CHECK(got == c.expected);
  }
}

TEST_CASE("prepopulate") {
  const auto protocol = Gazetteer::compile("Protocol", {"HTTP", "FTP", "DNS"});
  const std::vector<Gazetteer> gaz{protocol};

  SUBCASE("format match beats gazetteer") {
    // "http" sits inside the URL; the URL outranks the Protocol candidate.
    const auto doc = make_document("d", "fetches http://x.com/a daily");
    const auto set = prepopulate(doc, gaz);
    REQUIRE(set.entries.at("d").size() == 1);
    CHECK(set.entries.at("d")[0].label == "URL");
    CHECK(set.annotator_id == "rules");
  }
  SUBCASE("no matches") {
    const auto set = prepopulate(make_document("d", "nothing relevant"), gaz);
    CHECK(set.entries.at("d").empty());
  }
  SUBCASE("disjoint spans") {
    const std::string text = "FTP over port 21";
    CHECK(labelled(text, prepopulate_mentions(text, gaz)) == Pairs{{"Protocol", "FTP"}, {"Port", "21"}});
  }
  SUBCASE("outputs never overlap") {
    Rng rng(5);
    const auto os = Gazetteer::compile("Operating_System", {"windows", "windows server", "linux", "10.0"});
    for (int i = 0; i < 50; ++i) {
      std::string text = testing::random_gazetteer_text(rng, 80) + " http://10.0.0.1:80/windows 10.0.0.2:22 HTTP";
      const auto ms = prepopulate_mentions(text, {protocol, os});
      const std::size_t n = utf8_length(text);
      for (std::size_t k = 0; k < ms.size(); ++k) {
        CHECK(ms[k].end <= n);
        CHECK(ms[k].start < ms[k].end);
        if (k > 0) CHECK(ms[k - 1].end <= ms[k].start);
      }
    }
  }
}

TEST_CASE("shipped gazetteers load against both schema rounds") {
  const auto r2 = load_gazetteers(std::string(CYENTS_DATA) + "/gazetteers", Schema::round2());
  std::set<std::string> types;
  for (const auto& g : r2) types.insert(g.type_label());
  CHECK(types == std::set<std::string>{"Attack_Type", "File_Extension", "Malware_Type", "Operating_System",
                                       "Programming_Language", "Protocol"});
  const auto r1 = load_gazetteers(std::string(CYENTS_DATA) + "/gazetteers", Schema::round1());
  CHECK(r1.size() == 5);
}
