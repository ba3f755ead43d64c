#include <csignal>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cyents/cyents.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  UsageError(const CLI::App* app, const std::string& msg) : std::runtime_error(msg), app(app) {}
  const CLI::App* app;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(cyents_status st) {
  if (st != CYENTS_OK) {
    throw DomainError(std::string(cyents_status_name(st)) + ": " + cyents_last_error());
  }
}

class Owned {
 public:
  Owned() = default;
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  ~Owned() { cyents_string_free(p_); }
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p_); }
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};
using Store = Handle<cyents_store, cyents_store_close>;
using Gazetteers = Handle<cyents_gazetteers, cyents_gazetteers_free>;
using Model = Handle<cyents_model, cyents_model_free>;
using Service = Handle<cyents_service, cyents_service_free>;

void emit(const std::string& content, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    if (!out) throw DomainError("cannot write " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw DomainError("cannot write " + path);
}

// Options read from the command line, else from the JSON config file.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* opt(const std::string& name, T& var, const std::string& pointer, const std::string& desc) {
    CLI::Option* o = app_->add_option(name, var, desc);
    if (!pointer.empty()) {
      fallbacks_.push_back([o, &var, pointer](const json& cfg) {
        const json::json_pointer p(pointer);
        if (o->count() == 0 && cfg.contains(p)) var = cfg.at(p).get<T>();
      });
    }
    return o;
  }

  void apply(const json& cfg) {
    for (auto& f : fallbacks_) f(cfg);
  }

  void need(const std::string& value, const std::string& name) const {
    if (value.empty()) throw UsageError(app_, name + " is required (flag or config file)");
  }

  CLI::App* app() const { return app_; }

 private:
  CLI::App* app_;
  std::vector<std::function<void(const json&)>> fallbacks_;
};

json doc_filter(const std::vector<std::string>& docs) { return docs.empty() ? json() : json(docs); }

int log_level(const std::string& name) {
  static const std::vector<std::string> names = {"trace", "debug", "info", "warn", "error", "critical", "off"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return 3;
}

// Blocks SIGINT/SIGTERM for every thread and stops the service when one arrives.
void serve_until_signal(cyents_service* svc) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    cyents_service_stop(svc);
  });
  const cyents_status st = cyents_service_run(svc);
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  check(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyents: cybersecurity entity extraction toolkit"};
  app.require_subcommand(1);
  std::string config_path, level = "warn";
  app.add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  app.add_option("--log-level", level, "trace|debug|info|warn|error|critical|off");

  // schema
  auto* schema_cmd = app.add_subcommand("schema", "Entity type schema");
  auto* export_cmd = schema_cmd->add_subcommand("export", "Print a schema version as JSON");
  schema_cmd->require_subcommand(1);
  Binder export_b(export_cmd);
  std::string schema_version = "round2", export_out;
  export_b.opt("--version", schema_version, "/schema", "round1 or round2");
  export_b.opt("--out", export_out, "", "Output file (default stdout)");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Fetch feeds and store new articles");
  Binder ingest_b(ingest_cmd);
  std::string ingest_store, ingest_feeds, ingest_fixture;
  double ingest_delay = 1.0;
  ingest_b.opt("--store", ingest_store, "/store", "Corpus store directory");
  ingest_b.opt("--feeds", ingest_feeds, "/feeds", "File with one feed URL per line");
  ingest_b.opt("--fixture", ingest_fixture, "/fixture_web", "Recorded responses directory (offline)");
  ingest_b.opt("--delay", ingest_delay, "/ingest_delay", "Seconds between live requests");

  // segment
  auto* segment_cmd = app.add_subcommand("segment", "Sentence split and paragraph segmentation");
  Binder segment_b(segment_cmd);
  std::string segment_store, segment_text, segment_id = "text", segment_out;
  std::size_t window = 20, block_k = 6;
  double cutoff = 0.5;
  segment_b.opt("--store", segment_store, "/store", "Re-segment every document in this store");
  segment_b.opt("--text", segment_text, "", "Segment this text instead and print the document");
  segment_b.opt("--id", segment_id, "", "Document id for --text");
  segment_b.opt("--window", window, "/texttiling/window", "Pseudo-sentence size in tokens");
  segment_b.opt("--k", block_k, "/texttiling/k", "Block size in pseudo-sentences");
  segment_b.opt("--cutoff", cutoff, "/texttiling/cutoff", "Depth cutoff multiplier");
  segment_b.opt("--out", segment_out, "", "Output file (default stdout)");

  // prepopulate
  auto* pre_cmd = app.add_subcommand("prepopulate", "Rule-based pre-annotation");
  Binder pre_b(pre_cmd);
  std::string pre_store, pre_gaz, pre_schema = "round2", pre_out;
  std::vector<std::string> pre_docs;
  pre_b.opt("--store", pre_store, "/store", "Corpus store directory");
  pre_b.opt("--gazetteers", pre_gaz, "/gazetteers", "Gazetteer directory");
  pre_b.opt("--schema", pre_schema, "/schema", "round1 or round2");
  pre_b.opt("--docs", pre_docs, "", "Only these document ids");
  pre_b.opt("--out", pre_out, "", "Output JSONL (default stdout)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the annotation service");
  Binder serve_b(serve_cmd);
  std::string serve_store, serve_ann, serve_study, serve_gaz, serve_host = "127.0.0.1", serve_static;
  int serve_port = 8642;
  serve_b.opt("--store", serve_store, "/store", "Corpus store directory");
  serve_b.opt("--annotations", serve_ann, "/annotations", "Annotation directory");
  serve_b.opt("--study", serve_study, "/study", "Study config (groups, documents, tokens)");
  serve_b.opt("--gazetteers", serve_gaz, "/gazetteers", "Gazetteer directory for pre-annotation");
  serve_b.opt("--host", serve_host, "/host", "Bind address");
  serve_b.opt("--port", serve_port, "/port", "Port (0 picks a free one)");
  serve_b.opt("--static", serve_static, "/static", "Directory served at /");

  // iaa
  auto* iaa_cmd = app.add_subcommand("iaa", "Inter-annotator agreement over annotator pairs");
  Binder iaa_b(iaa_cmd);
  std::vector<std::string> iaa_a, iaa_b_paths;
  std::string iaa_schema = "round2", iaa_out;
  iaa_b.opt("--a", iaa_a, "", "First annotator's JSONL, one per pair")->required();
  iaa_b.opt("--b", iaa_b_paths, "", "Second annotator's JSONL, one per pair")->required();
  iaa_b.opt("--schema", iaa_schema, "/schema", "round1 or round2");
  iaa_b.opt("--out", iaa_out, "", "Output file (default stdout)");

  // merge
  auto* merge_cmd = app.add_subcommand("merge", "Keep the annotations every group member agrees on");
  Binder merge_b(merge_cmd);
  std::vector<std::string> merge_inputs;
  std::string merge_out, merge_schema = "round2";
  merge_b.opt("--inputs", merge_inputs, "", "Annotator JSONL files")->required();
  merge_b.opt("--out", merge_out, "", "Merged JSONL")->required();
  merge_b.opt("--schema", merge_schema, "/schema", "round1 or round2");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train the statistical tagger");
  Binder train_b(train_cmd);
  std::string train_store, train_gold, train_model, train_schema = "round2";
  std::size_t epochs = 0, batch = 0, rows = 0, width = 0;
  double lr = 0, dropout = 0;
  std::uint64_t seed = 0;
  train_b.opt("--store", train_store, "/store", "Corpus store directory");
  train_b.opt("--gold", train_gold, "/gold", "Gold JSONL");
  train_b.opt("--model-out", train_model, "/model", "Model file to write");
  train_b.opt("--schema", train_schema, "/schema", "round1 or round2");
  std::vector<std::pair<CLI::Option*, std::function<json()>>> tagger_flags = {
      {train_b.opt("--epochs", epochs, "", "Epochs"), [&] { return json(epochs); }},
      {train_b.opt("--lr", lr, "", "Learning rate"), [&] { return json(lr); }},
      {train_b.opt("--batch", batch, "", "Batch size"), [&] { return json(batch); }},
      {train_b.opt("--seed", seed, "", "RNG seed"), [&] { return json(seed); }},
      {train_b.opt("--dropout", dropout, "", "Dropout"), [&] { return json(dropout); }},
      {train_b.opt("--rows", rows, "", "Embedding rows"), [&] { return json(rows); }},
      {train_b.opt("--width", width, "", "Embedding width"), [&] { return json(width); }},
  };
  const std::vector<std::string> tagger_keys = {"epochs", "learning_rate", "batch_size", "rng_seed", "dropout", "rows", "width"};

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Tag stored documents with a trained model");
  Binder extract_b(extract_cmd);
  std::string extract_store, extract_model, extract_out;
  std::vector<std::string> extract_docs;
  extract_b.opt("--store", extract_store, "/store", "Corpus store directory");
  extract_b.opt("--model", extract_model, "/model", "Model file");
  extract_b.opt("--docs", extract_docs, "", "Only these document ids");
  extract_b.opt("--out", extract_out, "", "Output JSONL (default stdout)");

  // link
  auto* link_cmd = app.add_subcommand("link", "Link recognized mentions to Wikidata items");
  Binder link_b(link_cmd);
  std::string link_pred, link_store, link_fixture, link_endpoint, link_out, link_types;
  std::size_t alternatives = 5;
  link_b.opt("--model-output", link_pred, "", "Predicted JSONL")->required();
  link_b.opt("--store", link_store, "/store", "Corpus store directory");
  link_b.opt("--fixture", link_fixture, "/linker/fixture", "Recorded candidate responses (offline)");
  link_b.opt("--endpoint", link_endpoint, "", "Live API endpoint (or CYENTS_WIKIDATA_ENDPOINT)");
  link_b.opt("--relevant-types", link_types, "/linker/relevant_types", "Cyber-relevant type list");
  link_b.opt("--alternatives", alternatives, "/linker/alternatives", "Alternatives kept per span");
  link_b.opt("--out", link_out, "", "Output JSONL (default stdout)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Exact-match precision, recall and F-score");
  Binder eval_b(eval_cmd);
  std::string eval_gold, eval_pred, eval_json, eval_format = "text";
  eval_b.opt("--gold", eval_gold, "", "Gold JSONL")->required();
  eval_b.opt("--pred", eval_pred, "", "Predicted JSONL")->required();
  eval_b.opt("--json", eval_json, "", "Also write the JSON report here");
  eval_b.opt("--format", eval_format, "", "text or json")->check(CLI::IsMember({"text", "json"}));

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Write the templated synthetic corpus");
  Binder synth_b(synth_cmd);
  std::string synth_store, synth_train, synth_heldout;
  std::size_t synth_n_train = 200, synth_n_heldout = 50, per_doc = 5;
  std::uint64_t synth_seed = 7;
  synth_b.opt("--store", synth_store, "/store", "Corpus store directory");
  synth_b.opt("--train-gold", synth_train, "", "Training gold JSONL to write")->required();
  synth_b.opt("--heldout-gold", synth_heldout, "", "Held-out gold JSONL to write")->required();
  synth_b.opt("--train", synth_n_train, "", "Training sentences");
  synth_b.opt("--heldout", synth_n_heldout, "", "Held-out sentences");
  synth_b.opt("--seed", synth_seed, "", "Seed");
  synth_b.opt("--per-doc", per_doc, "", "Sentences per document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  cyents_set_log_level(log_level(level));

  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        cfg = json::parse(in);
      } catch (const json::parse_error& e) {
        throw UsageError(&app, "config " + config_path + ": " + e.what());
      }
    }
    for (Binder* b : {&export_b, &ingest_b, &segment_b, &pre_b, &serve_b, &iaa_b, &merge_b, &train_b, &extract_b,
                      &link_b, &eval_b, &synth_b}) {
      b->apply(cfg);
    }

    if (*export_cmd) {
      Owned out;
      check(cyents_schema_export(schema_version.c_str(), out.out()));
      emit(out.str(), export_out);
    } else if (*ingest_cmd) {
      ingest_b.need(ingest_store, "--store");
      ingest_b.need(ingest_feeds, "--feeds");
      Store store;
      check(cyents_store_open(ingest_store.c_str(), 1, store.out()));
      Owned report;
      check(cyents_ingest(store.get(), ingest_feeds.c_str(), ingest_fixture.empty() ? nullptr : ingest_fixture.c_str(),
                          ingest_delay, nullptr, report.out()));
      emit(report.str(), "");
    } else if (*segment_cmd) {
      const std::string params = json{{"window", window}, {"k", block_k}, {"cutoff", cutoff}}.dump();
      Owned out;
      if (segment_cmd->count("--text") > 0) {
        check(cyents_segment_text(segment_id.c_str(), segment_text.c_str(), params.c_str(), out.out()));
      } else {
        segment_b.need(segment_store, "--store or --text");
        Store store;
        check(cyents_store_open(segment_store.c_str(), 0, store.out()));
        check(cyents_segment_store(store.get(), params.c_str(), out.out()));
      }
      emit(out.str(), segment_out);
    } else if (*pre_cmd) {
      pre_b.need(pre_store, "--store");
      pre_b.need(pre_gaz, "--gazetteers");
      Store store;
      check(cyents_store_open(pre_store.c_str(), 0, store.out()));
      Gazetteers gaz;
      check(cyents_gazetteers_load(pre_gaz.c_str(), pre_schema.c_str(), gaz.out()));
      const json filter = doc_filter(pre_docs);
      const std::string ids = filter.dump();
      Owned out;
      check(cyents_prepopulate(gaz.get(), store.get(), filter.is_null() ? nullptr : ids.c_str(), out.out()));
      emit(out.str(), pre_out);
    } else if (*serve_cmd) {
      serve_b.need(serve_store, "--store");
      serve_b.need(serve_ann, "--annotations");
      serve_b.need(serve_study, "--study");
      Store store;
      check(cyents_store_open(serve_store.c_str(), 0, store.out()));
      Service svc;
      check(cyents_service_create(store.get(), serve_ann.c_str(), serve_study.c_str(),
                                  serve_gaz.empty() ? nullptr : serve_gaz.c_str(), svc.out()));
      int port = 0;
      check(cyents_service_bind(svc.get(), serve_host.c_str(), serve_port,
                                serve_static.empty() ? nullptr : serve_static.c_str(), &port));
      std::cout << "listening on http://" << serve_host << ":" << port << std::endl;
      serve_until_signal(svc.get());
    } else if (*iaa_cmd) {
      if (iaa_a.size() != iaa_b_paths.size()) throw UsageError(iaa_cmd, "--a and --b need the same number of files");
      std::vector<const char*> a, b;
      for (const auto& p : iaa_a) a.push_back(p.c_str());
      for (const auto& p : iaa_b_paths) b.push_back(p.c_str());
      Owned out;
      check(cyents_iaa(a.data(), b.data(), a.size(), iaa_schema.c_str(), out.out()));
      emit(out.str(), iaa_out);
    } else if (*merge_cmd) {
      std::vector<const char*> paths;
      for (const auto& p : merge_inputs) paths.push_back(p.c_str());
      Owned summary;
      check(cyents_merge(paths.data(), paths.size(), merge_schema.c_str(), merge_out.c_str(), summary.out()));
      emit(summary.str(), "");
    } else if (*train_cmd) {
      train_b.need(train_store, "--store");
      train_b.need(train_gold, "--gold");
      train_b.need(train_model, "--model-out");
      json tagger = cfg.value("tagger", json::object());
      for (std::size_t i = 0; i < tagger_flags.size(); ++i) {
        if (tagger_flags[i].first->count() > 0) tagger[tagger_keys[i]] = tagger_flags[i].second();
      }
      const std::string tagger_json = tagger.dump();
      Store store;
      check(cyents_store_open(train_store.c_str(), 0, store.out()));
      Model model;
      check(cyents_train(store.get(), train_gold.c_str(), train_schema.c_str(), tagger_json.c_str(), model.out()));
      check(cyents_model_save(model.get(), train_model.c_str()));
      Owned info;
      check(cyents_model_info(model.get(), info.out()));
      emit(info.str(), "");
    } else if (*extract_cmd) {
      extract_b.need(extract_store, "--store");
      extract_b.need(extract_model, "--model");
      Store store;
      check(cyents_store_open(extract_store.c_str(), 0, store.out()));
      Model model;
      check(cyents_model_load(extract_model.c_str(), model.out()));
      const json filter = doc_filter(extract_docs);
      const std::string ids = filter.dump();
      Owned out;
      check(cyents_extract(model.get(), store.get(), filter.is_null() ? nullptr : ids.c_str(), out.out()));
      emit(out.str(), extract_out);
    } else if (*link_cmd) {
      link_b.need(link_store, "--store");
      if (link_endpoint.empty() && link_fixture.empty()) {
        if (const char* env = std::getenv("CYENTS_WIKIDATA_ENDPOINT")) link_endpoint = env;
      }
      if (link_endpoint.empty() == link_fixture.empty()) {
        throw UsageError(link_cmd, "give exactly one of --fixture and --endpoint");
      }
      json lc = {{"alternatives", alternatives}};
      if (cfg.contains(json::json_pointer("/linker/weights"))) lc["weights"] = cfg.at(json::json_pointer("/linker/weights"));
      if (!link_types.empty()) lc["relevant_types"] = link_types;
      const std::string lc_json = lc.dump();
      Store store;
      check(cyents_store_open(link_store.c_str(), 0, store.out()));
      Owned out;
      check(cyents_link(link_pred.c_str(), store.get(), link_fixture.empty() ? nullptr : link_fixture.c_str(),
                        link_endpoint.empty() ? nullptr : link_endpoint.c_str(), lc_json.c_str(), out.out()));
      emit(out.str(), link_out);
    } else if (*eval_cmd) {
      Owned report, text;
      check(cyents_eval(eval_gold.c_str(), eval_pred.c_str(), report.out(), text.out()));
      if (!eval_json.empty()) emit(report.str(), eval_json);
      emit(eval_format == "json" ? report.str() : text.str(), "");
    } else if (*synth_cmd) {
      synth_b.need(synth_store, "--store");
      const std::string params =
          json{{"train", synth_n_train}, {"heldout", synth_n_heldout}, {"seed", synth_seed}, {"per_doc", per_doc}}.dump();
      Store store;
      check(cyents_store_open(synth_store.c_str(), 1, store.out()));
      Owned summary;
      check(cyents_synth(store.get(), params.c_str(), synth_train.c_str(), synth_heldout.c_str(), summary.out()));
      emit(summary.str(), "");
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << e.app->help();
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}
