#include "cyents/cyents.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>

#include "annoservice/server.hpp"
#include "annoservice/service.hpp"
#include "annotations/agreement.hpp"
#include "annotations/io.hpp"
#include "common/error.hpp"
#include "common/strings.hpp"
#include "eval/metrics.hpp"
#include "ingest/http.hpp"
#include "ingest/store.hpp"
#include "ingest/sync.hpp"
#include "linker/link.hpp"
#include "ner/synthetic.hpp"
#include "ner/tagger.hpp"
#include "rules/gazetteer.hpp"
#include "rules/patterns.hpp"
#include "schema/schema.hpp"
#include "spdlog/spdlog.h"

using namespace cyents;

struct cyents_store {
  CorpusStore store;
};

struct cyents_gazetteers {
  std::vector<Gazetteer> list;
};

struct cyents_model {
  TaggerModel model;
};

struct cyents_service {
  std::unique_ptr<AnnotationService> service;
  std::unique_ptr<AnnotationServer> server;
};

namespace {

thread_local std::string g_last_error;

cyents_status fail(cyents_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
cyents_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CYENTS_OK;
  } catch (const Error& e) {
    return fail(static_cast<cyents_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(CYENTS_E_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CYENTS_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CYENTS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(CYENTS_E_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

nlohmann::json parse_optional(const char* json) {
  if (!json || !*json) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

TextTilingParams tiling_params(const char* json) {
  const auto j = parse_optional(json);
  TextTilingParams p;
  p.window_w = j.value("window", p.window_w);
  p.block_k = j.value("k", p.block_k);
  p.depth_cutoff_multiplier = j.value("cutoff", p.depth_cutoff_multiplier);
  if (p.window_w == 0 || p.block_k == 0) throw Error(ErrorCode::kInvalidArgument, "window and k must be positive");
  return p;
}

const Schema& schema_for(const char* version) {
  return Schema::get(parse_schema_id(version ? version : "round2"));
}

std::vector<std::string> selected_ids(const CorpusStore& store, const char* doc_ids_json) {
  if (!doc_ids_json) return store.doc_ids();
  const auto j = parse_optional(doc_ids_json);
  if (!j.is_array()) throw Error(ErrorCode::kInvalidArgument, "doc id filter must be a JSON array");
  return j.get<std::vector<std::string>>();
}

AnnotationSet load_checked(const char* path, const Schema* schema) {
  require(path, "path");
  return load_jsonl(path, SpanChecks{schema, nullptr});
}

}  // namespace

extern "C" {

const char* cyents_last_error(void) { return g_last_error.c_str(); }

const char* cyents_status_name(cyents_status status) {
  if (status == CYENTS_OK) return "OK";
  if (status < CYENTS_E_INVALID_ARGUMENT || status > CYENTS_E_INTERNAL) return "Unknown";
  return error_code_name(static_cast<ErrorCode>(status));
}

const char* cyents_version(void) { return "1.0.0"; }

void cyents_string_free(char* s) { std::free(s); }

void cyents_set_log_level(int level) {
  if (level < 0) level = 0;
  if (level > 6) level = 6;
  spdlog::set_level(static_cast<spdlog::level::level_enum>(level));
}

cyents_status cyents_schema_export(const char* version, char** out_json) {
  return guard([&] {
    require(out_json, "out_json");
    *out_json = dup(schema_for(version).to_json().dump(2));
  });
}

cyents_status cyents_store_open(const char* root, int create, cyents_store** out) {
  return guard([&] {
    require(root && out, "root and out");
    *out = new cyents_store{CorpusStore::open(root, create != 0)};
  });
}

void cyents_store_close(cyents_store* store) { delete store; }

cyents_status cyents_store_doc_ids(const cyents_store* store, char** out_json) {
  return guard([&] {
    require(store && out_json, "store and out_json");
    *out_json = dup(nlohmann::json(store->store.doc_ids()).dump());
  });
}

cyents_status cyents_store_get(const cyents_store* store, const char* doc_id, char** out_json) {
  return guard([&] {
    require(store && doc_id && out_json, "store, doc_id and out_json");
    *out_json = dup(store->store.load(doc_id).to_json().dump());
  });
}

cyents_status cyents_store_put(cyents_store* store, const char* doc_json) {
  return guard([&] {
    require(store && doc_json, "store and doc_json");
    store->store.put(Document::from_json(parse_optional(doc_json)));
  });
}

cyents_status cyents_ingest(cyents_store* store, const char* feeds_path, const char* fixture_dir, double delay_seconds,
                            const char* params_json, char** out_report_json) {
  return guard([&] {
    require(store && feeds_path && out_report_json, "store, feeds_path and out_report_json");
    const auto feeds = read_feed_list(feeds_path);
    std::unique_ptr<HttpClient> http;
    if (fixture_dir) {
      http = std::make_unique<FixtureHttpClient>(fixture_dir);
    } else {
      http = std::make_unique<LiveHttpClient>(std::chrono::milliseconds(static_cast<long>(delay_seconds * 1000)));
    }
    *out_report_json = dup(sync(store->store, feeds, *http, tiling_params(params_json)).to_json().dump());
  });
}

cyents_status cyents_segment_text(const char* doc_id, const char* text, const char* params_json, char** out_doc_json) {
  return guard([&] {
    require(doc_id && text && out_doc_json, "doc_id, text and out_doc_json");
    *out_doc_json = dup(make_document(doc_id, text, std::nullopt, tiling_params(params_json)).to_json().dump());
  });
}

cyents_status cyents_segment_store(cyents_store* store, const char* params_json, char** out_report_json) {
  return guard([&] {
    require(store && out_report_json, "store and out_report_json");
    const auto params = tiling_params(params_json);
    nlohmann::json report = nlohmann::json::object();
    for (const auto& id : store->store.doc_ids()) {
      const Document old = store->store.load(id);
      const Document doc = make_document(old.doc_id, old.text, old.source_url, params);
      store->store.put(doc);
      report[id] = {{"sentences", doc.sentences.size()}, {"paragraphs", doc.paragraphs.size()}};
    }
    *out_report_json = dup(report.dump());
  });
}

cyents_status cyents_gazetteers_load(const char* dir, const char* version, cyents_gazetteers** out) {
  return guard([&] {
    require(dir && out, "dir and out");
    *out = new cyents_gazetteers{load_gazetteers(dir, schema_for(version))};
  });
}

void cyents_gazetteers_free(cyents_gazetteers* gazetteers) { delete gazetteers; }

cyents_status cyents_match_text(const cyents_gazetteers* gazetteers, const char* text, char** out_spans_json) {
  return guard([&] {
    require(gazetteers && text && out_spans_json, "gazetteers, text and out_spans_json");
    *out_spans_json = dup(spans_to_json(prepopulate_mentions(text, gazetteers->list)).dump());
  });
}

cyents_status cyents_prepopulate(const cyents_gazetteers* gazetteers, const cyents_store* store,
                                 const char* doc_ids_json, char** out_jsonl) {
  return guard([&] {
    require(gazetteers && store && out_jsonl, "gazetteers, store and out_jsonl");
    AnnotationSet all;
    all.annotator_id = "rules";
    for (const auto& id : selected_ids(store->store, doc_ids_json)) {
      auto one = prepopulate(store->store.load(id), gazetteers->list);
      all.entries.emplace(id, std::move(one.entries.at(id)));
    }
    *out_jsonl = dup(to_jsonl(all));
  });
}

cyents_status cyents_iaa(const char* const* a_paths, const char* const* b_paths, size_t pairs, const char* version,
                         char** out_json) {
  return guard([&] {
    require(a_paths && b_paths && out_json, "paths and out_json");
    if (pairs == 0) throw Error(ErrorCode::kInvalidArgument, "at least one annotator pair is required");
    const Schema& schema = schema_for(version);
    std::vector<IAAReport> groups;
    for (size_t i = 0; i < pairs; ++i) {
      groups.push_back(agreement(load_checked(a_paths[i], &schema), load_checked(b_paths[i], &schema)));
    }
    *out_json = dup(aggregate_study(std::move(groups)).to_json().dump(2));
  });
}

cyents_status cyents_merge(const char* const* paths, size_t count, const char* version, const char* out_path,
                           char** out_summary_json) {
  return guard([&] {
    require(paths && out_path && out_summary_json, "paths, out_path and out_summary_json");
    const Schema& schema = schema_for(version);
    std::vector<AnnotationSet> sets;
    for (size_t i = 0; i < count; ++i) sets.push_back(load_checked(paths[i], &schema));
    const AnnotationSet merged = merge_group(sets);
    save_jsonl(merged, out_path);
    *out_summary_json = dup(nlohmann::json{{"inputs", count},
                                           {"documents", merged.entries.size()},
                                           {"accepted", merged.mention_count()},
                                           {"labels", label_distribution(merged)}}
                                .dump());
  });
}

cyents_status cyents_train(const cyents_store* store, const char* gold_path, const char* version,
                           const char* config_json, cyents_model** out) {
  return guard([&] {
    require(store && gold_path && out, "store, gold_path and out");
    const Schema& schema = schema_for(version);
    const auto lengths = store->store.lengths();
    const AnnotationSet gold = load_jsonl(gold_path, SpanChecks{&schema, &lengths});
    std::vector<Document> docs;
    for (const auto& [id, spans] : gold.entries) docs.push_back(store->store.load(id));
    const TrainConfig config = TrainConfig::from_json(parse_optional(config_json));
    *out = new cyents_model{train(docs, gold, config, schema)};
  });
}

cyents_status cyents_model_load(const char* path, cyents_model** out) {
  return guard([&] {
    require(path && out, "path and out");
    *out = new cyents_model{TaggerModel::load(path)};
  });
}

cyents_status cyents_model_save(const cyents_model* model, const char* path) {
  return guard([&] {
    require(model && path, "model and path");
    model->model.save(path);
  });
}

void cyents_model_free(cyents_model* model) { delete model; }

cyents_status cyents_model_info(const cyents_model* model, char** out_json) {
  return guard([&] {
    require(model && out_json, "model and out_json");
    const auto& m = model->model;
    *out_json = dup(nlohmann::json{{"schema", to_string(m.schema_version)},
                                   {"labels", m.labels.size()},
                                   {"rows", m.rows},
                                   {"width", m.width},
                                   {"training", m.training_meta}}
                        .dump(2));
  });
}

cyents_status cyents_extract(const cyents_model* model, const cyents_store* store, const char* doc_ids_json,
                             char** out_jsonl) {
  return guard([&] {
    require(model && store && out_jsonl, "model, store and out_jsonl");
    std::vector<Document> docs;
    for (const auto& id : selected_ids(store->store, doc_ids_json)) docs.push_back(store->store.load(id));
    *out_jsonl = dup(to_jsonl(extract(docs, model->model)));
  });
}

cyents_status cyents_synth(cyents_store* store, const char* params_json, const char* train_gold_path,
                           const char* heldout_gold_path, char** out_summary_json) {
  return guard([&] {
    require(store && train_gold_path && heldout_gold_path && out_summary_json, "store, gold paths and summary");
    const auto j = parse_optional(params_json);
    const auto split = make_synthetic_corpus(j.value("train", std::size_t{200}), j.value("heldout", std::size_t{50}),
                                             j.value("seed", std::uint64_t{7}), j.value("per_doc", std::size_t{5}));
    for (const auto& d : split.train.docs) store->store.put(d);
    for (const auto& d : split.heldout.docs) store->store.put(d);
    save_jsonl(split.train.gold, train_gold_path);
    save_jsonl(split.heldout.gold, heldout_gold_path);
    *out_summary_json = dup(nlohmann::json{{"train_docs", split.train.docs.size()},
                                           {"heldout_docs", split.heldout.docs.size()},
                                           {"train_spans", split.train.gold.mention_count()},
                                           {"heldout_spans", split.heldout.gold.mention_count()}}
                                .dump());
  });
}

cyents_status cyents_link(const char* pred_path, const cyents_store* store, const char* fixture_dir,
                          const char* endpoint, const char* config_json, char** out_jsonl) {
  return guard([&] {
    require(pred_path && store && out_jsonl, "pred_path, store and out_jsonl");
    if ((fixture_dir == nullptr) == (endpoint == nullptr)) {
      throw Error(ErrorCode::kInvalidArgument, "exactly one of fixture directory and endpoint is required");
    }
    const auto j = parse_optional(config_json);
    LinkerConfig config;
    if (j.contains("weights")) config.weights = LinkWeights::from_json(j["weights"]);
    if (j.contains("relevant_types")) {
      config.relevant_types = LinkerConfig::load_relevant_types(j["relevant_types"].get<std::string>());
    }
    config.alternatives = j.value("alternatives", config.alternatives);

    std::unique_ptr<HttpClient> http;
    std::unique_ptr<CandidateClient> inner;
    if (fixture_dir) {
      inner = std::make_unique<FixtureCandidateClient>(fixture_dir);
    } else {
      http = std::make_unique<LiveHttpClient>(std::chrono::milliseconds(200));
      inner = std::make_unique<WikidataClient>(*http, endpoint);
    }
    CachedClient client(*inner);

    const auto lengths = store->store.lengths();
    const AnnotationSet pred = load_jsonl(pred_path, SpanChecks{nullptr, &lengths});
    std::string out;
    for (const auto& [doc_id, spans] : pred.entries) {
      const auto results = link_document(store->store.load(doc_id), spans, client, config);
      out += linked_record(doc_id, pred.annotator_id, results, config.alternatives).dump() + "\n";
    }
    *out_jsonl = dup(out);
  });
}

cyents_status cyents_eval(const char* gold_path, const char* pred_path, char** out_json, char** out_text) {
  return guard([&] {
    require(gold_path && pred_path, "gold_path and pred_path");
    const MetricsReport r = report(load_jsonl(gold_path), load_jsonl(pred_path));
    if (out_json) *out_json = dup(r.to_json().dump(2));
    if (out_text) *out_text = dup(r.to_text());
  });
}

cyents_status cyents_service_create(const cyents_store* store, const char* annotations_dir, const char* config_path,
                                    const char* gazetteer_dir, cyents_service** out) {
  return guard([&] {
    require(store && annotations_dir && config_path && out, "store, annotations_dir, config_path and out");
    ServiceConfig config = ServiceConfig::load(config_path);
    std::vector<Gazetteer> gaz;
    if (gazetteer_dir) gaz = load_gazetteers(gazetteer_dir, Schema::get(config.schema));
    auto svc = std::make_unique<cyents_service>();
    svc->service = std::make_unique<AnnotationService>(store->store, annotations_dir, std::move(config), std::move(gaz));
    *out = svc.release();
  });
}

cyents_status cyents_service_bind(cyents_service* service, const char* host, int port, const char* static_dir,
                                  int* out_port) {
  return guard([&] {
    require(service && host && out_port, "service, host and out_port");
    service->server = std::make_unique<AnnotationServer>(
        *service->service, static_dir ? std::optional<std::string>(static_dir) : std::nullopt);
    *out_port = service->server->bind(host, port);
  });
}

cyents_status cyents_service_run(cyents_service* service) {
  return guard([&] {
    require(service && service->server, "bound service");
    service->server->run();
  });
}

void cyents_service_stop(cyents_service* service) {
  if (service && service->server) service->server->stop();
}

void cyents_service_free(cyents_service* service) { delete service; }

}  // extern "C"
