#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "annotations/agreement.hpp"
#include "annotations/io.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/utf8.hpp"
#include "eval/metrics.hpp"
#include "linker/candidates.hpp"
#include "linker/link.hpp"
#include "linker/rank.hpp"
#include "ner/decode.hpp"
#include "ner/model.hpp"
#include "ner/synthetic.hpp"
#include "ner/tagger.hpp"
#include "rules/gazetteer.hpp"
#include "rules/patterns.hpp"
#include "spdlog/spdlog.h"
#include "support/oracles.hpp"
#include "support/table_values.hpp"
#include "text/document.hpp"

using namespace cyents;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kFixtures = CYENTS_FIXTURES;
const std::string kData = CYENTS_DATA;
const std::string kBin = CYENTS_BIN;

// Collects failed checks for one criterion.
struct Checks {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Criterion {
  int number;
  std::string title;
  double budget_seconds;
  std::function<void(Checks&)> body;
};

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

// 1
void metric_arithmetic(Checks& c) {
  const Prf overall = prf({92, 38, 60});
  c.expect(std::abs(overall.precision() - testing::kOverallP) <= 0.005, "P " + fixed(overall.precision(), 2));
  c.expect(std::abs(overall.recall() - testing::kOverallR) <= 0.005, "R " + fixed(overall.recall(), 2));
  c.expect(std::abs(overall.f_score() - testing::kOverallF) <= 0.005, "F " + fixed(overall.f_score(), 2));
  // Independent floating-point recomputation.
  const double p = 100.0 * 92 / 130, r = 100.0 * 92 / 152;
  c.expect(std::abs(overall.f_score() - 2 * p * r / (p + r)) <= 0.005, "F vs closed form");

  std::size_t checked = 0;
  for (const auto& row : testing::per_type_rows()) {
    if (testing::harmonic_check_exempt(row.type)) continue;
    const double h = harmonic_mean(row.p, row.r);
    c.expect(std::abs(row.f - h) < 0.01, row.type + " harmonic " + fixed(h, 2) + " vs " + fixed(row.f, 2));
    ++checked;
  }
  c.expect(checked == testing::per_type_rows().size() - 1, "exactly one exempt row");
}

// 2
Mention span(std::size_t start, std::size_t end, const std::string& label) {
  return Mention{start, end, label, Provenance::kHuman, 1.0};
}

// Two annotators over ten documents: `shared` identical spans, `a` pads to
// `max_count`, `b` adds `b_extra` spans of its own.
std::pair<AnnotationSet, AnnotationSet> constructed_group(const std::string& tag, std::size_t max_count,
                                                          std::size_t shared, std::size_t b_extra) {
  AnnotationSet a{tag + "-a", {}}, b{tag + "-b", {}};
  const std::vector<std::string> labels = {"Malware_Name", "Threat_Actor", "Software_Name", "Protocol"};
  const std::size_t docs = 10;
  for (std::size_t d = 0; d < docs; ++d) {
    a.entries[tag + "-doc" + std::to_string(d)];
    b.entries[tag + "-doc" + std::to_string(d)];
  }
  auto place = [&](AnnotationSet& s, std::size_t i, std::size_t offset) {
    const std::string doc = tag + "-doc" + std::to_string(i % docs);
    const std::size_t start = offset + 10 * (i / docs);
    s.entries[doc].push_back(span(start, start + 3, labels[i % labels.size()]));
  };
  for (std::size_t i = 0; i < shared; ++i) {
    place(a, i, 0);
    place(b, i, 0);
  }
  for (std::size_t i = shared; i < max_count; ++i) place(a, i, 0);
  for (std::size_t i = shared; i < shared + b_extra; ++i) place(b, i, 5);  // shifted, so never agree
  for (auto* s : {&a, &b})
    for (auto& [d, ms] : s->entries) std::sort(ms.begin(), ms.end(), [](const Mention& x, const Mention& y) { return x.start < y.start; });
  return {a, b};
}

void iaa_accounting(Checks& c) {
  const std::size_t maxes[] = {600, 580, 575};
  const std::size_t accepted[] = {270, 260, 251};
  const std::size_t b_extra[] = {100, 300, 0};
  std::vector<IAAReport> groups;
  for (int g = 0; g < 3; ++g) {
    const auto [a, b] = constructed_group("g" + std::to_string(g), maxes[g], accepted[g], b_extra[g]);
    // Round-trip through the JSONL form the tools exchange.
    const auto ra = parse_jsonl(to_jsonl(a));
    const auto rb = parse_jsonl(to_jsonl(b));
    const auto rep = agreement(ra, rb);
    c.expect(rep.total_max == maxes[g], "group " + std::to_string(g) + " total_max " + std::to_string(rep.total_max));
    c.expect(rep.accepted == accepted[g], "group " + std::to_string(g) + " accepted " + std::to_string(rep.accepted));
    groups.push_back(rep);
  }
  const auto study = aggregate_study(groups);
  c.expect(study.total_max == 1755, "total_max " + std::to_string(study.total_max));
  c.expect(study.accepted == 781, "accepted " + std::to_string(study.accepted));
  c.expect(std::abs(study.acceptance_rate - 0.445) <= 0.001, "rate " + fixed(study.acceptance_rate));
}

// 3
void rule_recognizers(Checks& c) {
  const auto cases = testing::load_regex_cases(kFixtures + "/regex_cases.tsv");
  c.expect(cases.size() == 200, "regex fixture has " + std::to_string(cases.size()) + " items");
  std::size_t correct = 0;
  for (const auto& rc : cases) {
    std::multiset<std::pair<std::string, std::string>> got;
    for (const auto& m : match_patterns(rc.text)) got.insert({m.label, utf8_substr(rc.text, m.start, m.end)});
    if (got == rc.expected) {
      ++correct;
    } else {
      c.expect(false, "regex: " + rc.text);
    }
  }
  c.expect(correct == cases.size(), "regex accuracy " + std::to_string(correct) + "/" + std::to_string(cases.size()));

  const auto& entries = testing::oracle_gazetteer_entries();
  const auto g = Gazetteer::compile("Operating_System", {entries.begin(), entries.end()});
  Rng rng(2024);
  std::size_t agree = 0;
  for (int doc = 0; doc < 100; ++doc) {
    const std::string text = testing::random_gazetteer_text(rng, 1000);
    std::vector<testing::SpanLabel> got;
    for (const auto& m : g.match(text)) got.push_back({m.start, m.end, m.label});
    agree += got == testing::brute_force_gazetteer(text, entries, "Operating_System");
  }
  c.expect(agree == 100, "gazetteer agreement " + std::to_string(agree) + "/100");
}

// 4
void tagger_learnability(Checks& c) {
  const Schema& schema = Schema::round2();
  const auto split = make_synthetic_corpus(200, 50);
  auto names = [](const SyntheticCorpus& corpus) {
    std::set<std::string> out;
    for (const auto& d : corpus.docs)
      for (const auto& m : corpus.gold.entries.at(d.doc_id))
        if (m.label == "Threat_Actor" || m.label == "Malware_Name") out.insert(utf8_substr(d.text, m.start, m.end));
    return out;
  };
  const auto train_names = names(split.train), held_names = names(split.heldout);
  std::vector<std::string> shared;
  std::set_intersection(train_names.begin(), train_names.end(), held_names.begin(), held_names.end(),
                        std::back_inserter(shared));
  c.expect(shared.empty() && !held_names.empty(), "name inventories overlap");

  const TrainConfig cfg;
  const auto model = train(split.train.docs, split.train.gold, cfg, schema);
  const auto pred = extract(split.heldout.docs, model);
  const auto rep = report(split.heldout.gold, pred);
  const double f = rep.micro.scores.f_score() / 100.0;
  std::cout << "  (a) held-out micro-F " << fixed(f) << "\n";
  c.expect(f >= 0.90, "micro-F " + fixed(f));

  auto m = TaggerModel::create(schema, 11, 50, 8);
  Rng rng(12);
  for (int g : {kOutW, kOutB, kConv0B, kConv1B})
    for (auto& v : m.params.w[g]) v = rng.uniform(-0.5, 0.5);
  auto index_of = [&](const std::string& l) {
    return static_cast<std::size_t>(std::find(m.labels.begin(), m.labels.end(), l) - m.labels.begin());
  };
  TaggedSentence s{{"Lazarus", "used", "WannaCry", "against", "banks", "in", "2017", "."}, {}};
  s.gold = {index_of("U-Threat_Actor"), 0, index_of("U-Malware_Name"), 0, 0, 0, index_of("U-DATE"), 0};
  const auto gc = gradient_check(m, s, 1e-4);
  double worst = 0.0;
  for (int g = 0; g < kWeightGroupCount; ++g) {
    worst = std::max(worst, gc.per_group[g]);
    c.expect(gc.per_group[g] < 1e-4, std::string("gradient ") + weight_group_name(g) + " " + std::to_string(gc.per_group[g]));
  }
  std::cout << "  (b) max relative gradient error " << worst << " over " << gc.checked << " weights\n";

  const auto first = model.serialize();
  const auto second = train(split.train.docs, split.train.gold, cfg, schema).serialize();
  std::cout << "  (c) two seeded runs: " << first.size() << " bytes each, " << (first == second ? "identical" : "different")
            << "\n";
  c.expect(first == second, "seeded runs differ");
}

// 5
void decoding(Checks& c) {
  const Schema& schema = Schema::round2();
  const auto labels = tagger_labels(schema);
  std::vector<Tag> tags;
  for (const auto& l : labels) tags.push_back(parse_tag(l));
  Rng rng(5);
  std::size_t bad = 0, spans_seen = 0;
  std::vector<double> logits;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = rng.below(40);
    logits.assign(n * labels.size(), 0.0);
    for (auto& v : logits) v = rng.uniform(-3.0, 3.0);
    std::vector<Tag> seq;
    for (std::size_t t = 0; t < n; ++t) seq.push_back(tags[argmax(&logits[t * labels.size()], labels.size())]);
    const auto spans = decode_bilou(seq);
    spans_seen += spans.size();
    for (std::size_t k = 0; k < spans.size(); ++k) {
      bool ok = spans[k].first <= spans[k].last && spans[k].last < n && schema.contains(spans[k].type);
      if (k > 0) ok = ok && spans[k - 1].last < spans[k].first;
      bad += !ok;
    }
  }
  std::cout << "  " << spans_seen << " spans decoded\n";
  c.expect(bad == 0, std::to_string(bad) + " malformed spans");
  c.expect(spans_seen > 0, "no spans decoded");
}

// 6
void entity_linking(Checks& c) {
  FixtureCandidateClient client(kFixtures + "/wikidata");
  const auto candidates = client.search("Lazarus");
  const auto types = LinkerConfig::load_relevant_types(kData + "/linker/relevant_types.json");
  const std::string context = "Lazarus was behind the WannaCry attack";
  c.expect(candidates.size() >= 20, std::to_string(candidates.size()) + " candidates");

  const auto r = rank("Lazarus", context, candidates, LinkWeights{}, types);
  c.expect(!r.ranked.empty() && r.ranked.front().candidate.qid == "Q19284445",
           "top is " + (r.ranked.empty() ? std::string("none") : r.ranked.front().candidate.qid));
  c.expect(r.decision == std::optional<std::string>("Q19284445"), "decision");
  if (r.ranked.size() > 1) {
    std::cout << "  top " << r.ranked[0].candidate.qid << " " << fixed(r.ranked[0].score) << ", runner-up "
              << r.ranked[1].candidate.qid << " " << fixed(r.ranked[1].score) << "\n";
  }

  auto order = [](const Ranking& k) {
    std::vector<std::string> q;
    for (const auto& s : k.ranked) q.push_back(s.candidate.qid);
    return q;
  };
  const auto want = order(r);
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    auto shuffled = candidates;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    c.expect(order(rank("Lazarus", context, shuffled, LinkWeights{}, types)) == want, "order depends on input order");
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& qid = candidates[i].qid;
    auto position = [&](const Ranking& k) {
      for (std::size_t p = 0; p < k.ranked.size(); ++p)
        if (k.ranked[p].candidate.qid == qid) return std::make_pair(p, k.ranked[p].score);
      return std::make_pair(k.ranked.size(), 0.0);
    };
    const auto before = position(r);
    auto boosted = candidates;
    boosted[i].prominence = boosted[i].prominence * 3 + 10;
    const auto after = position(rank("Lazarus", context, boosted, LinkWeights{}, types));
    c.expect(after.second >= before.second - 1e-12, qid + " score fell with prominence");
    c.expect(after.first <= before.first, qid + " rank fell with prominence");
  }
}

// 7
std::string rotated_sentence(const std::vector<std::string>& vocab, std::size_t shift) {
  std::string s;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    std::string w = vocab[(i + shift) % vocab.size()];
    if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    s += (i ? " " : "") + w;
  }
  return s + ".";
}

void texttiling(Checks& c) {
  const std::vector<std::string> a = {"alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf",
                                      "hotel", "india", "juliet", "kilo", "lima", "mike", "november",
                                      "oscar", "papa", "quebec", "romeo", "sierra", "tango"};
  const std::vector<std::string> b = {"apple", "banana", "cherry", "date", "elder", "feijoa", "grape",
                                      "honeydew", "kiwi", "lemon", "mango", "nectarine", "olive", "peach",
                                      "quince", "raspberry", "strawberry", "tangerine", "ugli", "vanilla"};
  std::string two, uniform;
  for (std::size_t i = 0; i < 10; ++i) two += (i ? " " : "") + rotated_sentence(a, i);
  for (std::size_t i = 0; i < 10; ++i) two += " " + rotated_sentence(b, i);
  for (std::size_t i = 0; i < 20; ++i) uniform += (i ? " " : "") + rotated_sentence(a, 0);

  const auto d2 = make_document("two", two);
  c.expect(d2.sentences.size() == 20, "two-topic sentences " + std::to_string(d2.sentences.size()));
  c.expect(d2.paragraphs == std::vector<SentenceRange>{{0, 10}, {10, 20}}, "two-topic boundary not at the seam");
  const auto du = make_document("uniform", uniform);
  c.expect(du.paragraphs == std::vector<SentenceRange>{{0, 20}}, "uniform document has a boundary");
  const auto ds = make_document("short", "Only one sentence. And a second.");
  c.expect(ds.paragraphs == std::vector<SentenceRange>{{0, ds.sentences.size()}}, "short input split");
}

// 8
struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = kBin + " --log-level off " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<nlohmann::json> jsonl_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<nlohmann::json> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

void end_to_end(Checks& c) {
  const fs::path root = fs::temp_directory_path() / "cyents_acceptance_e2e";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string store = (root / "store").string();
  auto file = [&](const char* name) { return (root / name).string(); };
  auto step = [&](const std::string& name, const std::string& args) {
    const auto t0 = Clock::now();
    const auto r = run(args);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::cout << "  " << name << ": exit " << r.code << " (" << fixed(secs, 2) << " s)\n";
    c.expect(r.code == 0, name + " exited " + std::to_string(r.code) + ": " + r.out.substr(0, 300));
    return r.code == 0;
  };

  const std::string web = kFixtures + "/web";
  if (!step("ingest", "ingest --store " + store + " --feeds " + web + "/feeds.txt --fixture " + web)) return;
  if (!step("segment", "segment --store " + store)) return;
  if (!step("prepopulate", "prepopulate --store " + store + " --gazetteers " + kData + "/gazetteers --out " +
                               file("annotator_a.jsonl")))
    return;

  // A second annotator keeps every other span of the first.
  {
    std::ofstream out(file("annotator_b.jsonl"));
    for (auto line : jsonl_lines(file("annotator_a.jsonl"))) {
      line["annotator"] = "annotator_b";
      nlohmann::json kept = nlohmann::json::array();
      for (std::size_t i = 0; i < line["spans"].size(); i += 2) kept.push_back(line["spans"][i]);
      line["spans"] = kept;
      out << line.dump() << "\n";
    }
  }
  if (!step("merge", "merge --inputs " + file("annotator_a.jsonl") + " " + file("annotator_b.jsonl") + " --out " +
                         file("merged.jsonl")))
    return;
  c.expect(!jsonl_lines(file("merged.jsonl")).empty(), "merge wrote nothing");

  if (!step("synth", "synth --store " + store + " --train-gold " + file("train_gold.jsonl") + " --heldout-gold " +
                         file("heldout_gold.jsonl")))
    return;
  if (!step("train", "train --store " + store + " --gold " + file("train_gold.jsonl") + " --model-out " +
                         file("model.cyents")))
    return;
  std::string heldout_ids;
  for (const auto& line : jsonl_lines(file("heldout_gold.jsonl"))) heldout_ids += " " + line["doc_id"].get<std::string>();
  if (!step("extract", "extract --store " + store + " --model " + file("model.cyents") + " --docs" + heldout_ids +
                           " --out " + file("pred.jsonl")))
    return;
  if (!step("eval", "eval --gold " + file("heldout_gold.jsonl") + " --pred " + file("pred.jsonl") + " --json " +
                        file("eval.json")))
    return;
  std::ifstream ej(file("eval.json"));
  const auto report_json = nlohmann::json::parse(ej);
  std::cout << "  held-out micro-F " << report_json["micro"]["f_score"] << "\n";

  std::size_t docs = 0, with_newline = 0;
  for (const auto& entry : fs::directory_iterator(root / "store" / "docs")) {
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    const auto doc = nlohmann::json::parse(ss.str());
    ++docs;
    with_newline += doc["text"].get<std::string>().find('\n') != std::string::npos;
  }
  c.expect(docs > 7, "store holds " + std::to_string(docs) + " documents");
  c.expect(with_newline == 0, std::to_string(with_newline) + " stored documents contain a newline");
  fs::remove_all(root);
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::off);
  const std::vector<Criterion> criteria = {
      {1, "metric arithmetic", 1.0, metric_arithmetic},
      {2, "agreement accounting", 1.0, iaa_accounting},
      {3, "rule recognizers", 5.0, rule_recognizers},
      {4, "tagger learnability", 60.0, tagger_learnability},
      {5, "decoding well-formedness", 10.0, decoding},
      {6, "entity linking", 2.0, entity_linking},
      {7, "texttiling", 1.0, texttiling},
      {8, "end-to-end offline run", 90.0, end_to_end},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto t0 = Clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs >= cr.budget_seconds) {
      checks.failures.push_back("took " + fixed(secs, 2) + " s, budget " + fixed(cr.budget_seconds, 0) + " s");
    }
    const bool pass = checks.failures.empty();
    failed += !pass;
    std::cout << "CRITERION " << cr.number << " " << (pass ? "PASS" : "FAIL") << " " << cr.title << " (" << fixed(secs, 3)
              << " s)\n";
    for (const auto& f : checks.failures) std::cout << "  - " << f << "\n";
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
