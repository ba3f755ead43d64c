#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <signal.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = CYENTS_BIN;
const std::string kFixtures = CYENTS_FIXTURES;
const std::string kData = CYENTS_DATA;
const std::string kCli = kFixtures + "/cli";

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = kBin + " --log-level off " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> jsonl(const std::string& s) {
  std::vector<json> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

struct Scratch {
  fs::path root;
  explicit Scratch(const std::string& name) : root(fs::temp_directory_path() / name) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }
  std::string operator/(const std::string& name) const { return (root / name).string(); }
};

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("eval --gold only.jsonl").code == 2);
  CHECK(run("train --store x").code == 2);
  CHECK(run("extract --store /nonexistent/store --model x").code == 1);
  CHECK(run("--config /nonexistent.json schema export").code == 2);
  const auto help = run("--help").out;
  for (const char* sub : {"schema", "ingest", "segment", "prepopulate", "serve", "iaa", "merge", "train", "extract", "link",
                          "eval", "synth"}) {
    CHECK(help.find(sub) != std::string::npos);
  }
}

TEST_CASE("schema export") {
  const auto r = run("schema export --version round1");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["version"] == "round1");
  CHECK(run("schema export --version round3").code == 1);
}

TEST_CASE("eval of a file against itself is all 100.00") {
  const auto r = run("eval --gold " + kCli + "/overfit_gold.jsonl --pred " + kCli + "/overfit_gold.jsonl");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Malware_Name") != std::string::npos);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream cols(line);
    std::string name, p, rr, f;
    cols >> name >> p >> rr >> f;
    CHECK(p == "100.00");
    CHECK(rr == "100.00");
    CHECK(f == "100.00");
  }
}

TEST_CASE("extract with an overfit model matches the golden file") {
  Scratch s("cyents_cli_golden");
  const auto train = run("--config " + kCli + "/overfit_config.json train --store " + kCli + "/store --gold " + kCli +
                         "/overfit_gold.jsonl --model-out " + (s / "m.bin"));
  REQUIRE(train.code == 0);
  CHECK(json::parse(train.out)["training"]["config"]["epochs"] == 30);
  const auto ex = run("extract --store " + kCli + "/store --model " + (s / "m.bin") + " --docs overfit-1 --out " +
                      (s / "pred.jsonl"));
  REQUIRE(ex.code == 0);
  auto got = jsonl(slurp(s / "pred.jsonl"));
  const auto want = jsonl(slurp(kCli + "/extract_golden.jsonl"));
  REQUIRE(got.size() == want.size());
  for (auto& span : got[0]["spans"]) {
    CHECK(span["score"].get<double>() > 0.5);
    CHECK(span["score"].get<double>() <= 1.0);
    span.erase("score");
  }
  CHECK(got == want);

  const auto again = run("extract --store " + kCli + "/store --model " + (s / "m.bin") + " --docs overfit-1");
  CHECK(again.out == slurp(s / "pred.jsonl"));
  const auto all = run("extract --store " + kCli + "/store --model " + (s / "m.bin"));
  CHECK(jsonl(all.out).size() == 2);
}

TEST_CASE("flags override the config file") {
  Scratch s("cyents_cli_override");
  const auto r = run("--config " + kCli + "/overfit_config.json train --epochs 2 --store " + kCli + "/store --gold " +
                     kCli + "/overfit_gold.jsonl --model-out " + (s / "m.bin"));
  REQUIRE(r.code == 0);
  const auto info = json::parse(r.out);
  CHECK(info["training"]["config"]["epochs"] == 2);
  CHECK(info["rows"] == 500);
}

TEST_CASE("ingest, prepopulate, iaa, merge and link") {
  Scratch s("cyents_cli_flow");
  const std::string store = s / "store";
  const auto ing = run("ingest --store " + store + " --feeds " + kFixtures + "/web/feeds.txt --fixture " + kFixtures + "/web");
  REQUIRE(ing.code == 0);
  CHECK(json::parse(ing.out)["added"] == 7);
  CHECK(json::parse(run("ingest --store " + store + " --feeds " + kFixtures + "/web/feeds.txt --fixture " + kFixtures +
                        "/web")
                        .out)["skipped"] == 7);
  CHECK(run("segment --store " + store + " --window 10 --k 3").code == 0);

  const auto pre = run("prepopulate --store " + store + " --gazetteers " + kData + "/gazetteers --out " + (s / "a.jsonl"));
  REQUIRE(pre.code == 0);
  auto lines = jsonl(slurp(s / "a.jsonl"));
  REQUIRE(lines.size() == 7);
  // Second annotator drops the first span of every document.
  std::string b;
  for (auto line : lines) {
    line["annotator"] = "b";
    if (!line["spans"].empty()) line["spans"].erase(0);
    b += line.dump() + "\n";
  }
  std::ofstream(s / "b.jsonl") << b;

  const auto iaa = run("iaa --a " + (s / "a.jsonl") + " --b " + (s / "b.jsonl"));
  REQUIRE(iaa.code == 0);
  const auto report = json::parse(iaa.out);
  CHECK(report["accepted"].get<double>() < report["total_max"].get<double>());

  const auto merge = run("merge --inputs " + (s / "a.jsonl") + " " + (s / "b.jsonl") + " --out " + (s / "m.jsonl"));
  REQUIRE(merge.code == 0);
  CHECK(json::parse(merge.out)["accepted"] == report["accepted"]);

  std::ofstream(s / "pred.jsonl") << jsonl(slurp(s / "a.jsonl"))[0].dump() << "\n";
  const auto link = run("link --model-output " + (s / "pred.jsonl") + " --store " + store + " --fixture " + kFixtures +
                        "/wikidata --relevant-types " + kData + "/linker/relevant_types.json");
  REQUIRE(link.code == 0);
  for (const auto& span : jsonl(link.out)[0]["spans"]) CHECK(span.contains("link"));
  CHECK(run("link --model-output " + (s / "pred.jsonl") + " --store " + store).code == 2);
}

TEST_CASE("synth writes a corpus and gold files") {
  Scratch s("cyents_cli_synth");
  const auto r = run("synth --store " + (s / "store") + " --train-gold " + (s / "t.jsonl") + " --heldout-gold " +
                     (s / "h.jsonl") + " --train 20 --heldout 10 --per-doc 5");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["train_docs"] == 4);
  CHECK(jsonl(slurp(s / "h.jsonl")).size() == 2);
}

TEST_CASE("serve answers requests and stops on SIGTERM") {
  Scratch s("cyents_cli_serve");
  fs::create_directories(s.root / "store" / "docs");
  fs::copy_file(kCli + "/store/docs/overfit-1.jsonl", s.root / "store" / "docs" / "overfit-1.jsonl");
  std::ofstream(s / "store/index.json") << "{}";
  std::ofstream(s / "study.json") << R"({"groups": {"g1": {"annotators": ["a", "b"]}}})";
  const std::string cmd = kBin + " serve --store " + (s / "store") + " --annotations " + (s / "ann") + " --study " +
                          (s / "study.json") + " --gazetteers " + kData + "/gazetteers --port 0 > " + (s / "log") +
                          " 2>&1 & echo $!";
  FILE* p = popen(cmd.c_str(), "r");
  int pid = 0;
  REQUIRE(std::fscanf(p, "%d", &pid) == 1);
  pclose(p);
  int port = 0;
  for (int i = 0; i < 200 && port == 0; ++i) {
    const auto log = slurp(s / "log");
    const auto at = log.find("127.0.0.1:");
    if (at != std::string::npos && log.find('\n', at) != std::string::npos) port = std::stoi(log.substr(at + 10));
    if (port == 0) std::this_thread::sleep_for(std::chrono::milliseconds(25));
  }
  REQUIRE(port > 0);
  httplib::Client cli("127.0.0.1", port);
  auto res = cli.Get("/api/tasks/next?annotator=a");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["doc"]["doc_id"] == "overfit-1");
  kill(pid, SIGTERM);
  bool gone = false;
  for (int i = 0; i < 200 && !gone; ++i) {
    gone = kill(pid, 0) != 0;
    if (!gone) std::this_thread::sleep_for(std::chrono::milliseconds(25));
  }
  CHECK(gone);
}
