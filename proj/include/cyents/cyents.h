#ifndef CYENTS_CYENTS_H
#define CYENTS_CYENTS_H

#include <stddef.h>

#if defined(_WIN32)
#define CYENTS_API __declspec(dllexport)
#else
#define CYENTS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values are stable. */
typedef enum cyents_status {
  CYENTS_OK = 0,
  CYENTS_E_INVALID_ARGUMENT = 1,
  CYENTS_E_UNKNOWN_TYPE = 2,
  CYENTS_E_IO = 3,
  CYENTS_E_PARSE = 4,
  CYENTS_E_SPAN_OUT_OF_BOUNDS = 5,
  CYENTS_E_UNKNOWN_LABEL = 6,
  CYENTS_E_OVERLAPPING_SPANS = 7,
  CYENTS_E_DOC_MISMATCH = 8,
  CYENTS_E_EMPTY_DATASET = 9,
  CYENTS_E_LABEL_OUTSIDE_SCHEMA = 10,
  CYENTS_E_EMPTY_GAZETTEER = 11,
  CYENTS_E_NETWORK = 12,
  CYENTS_E_FEED_PARSE = 13,
  CYENTS_E_EMPTY_EXTRACTION = 14,
  CYENTS_E_CLIENT = 15,
  CYENTS_E_VALIDATION = 16,
  CYENTS_E_UNKNOWN_ANNOTATOR = 17,
  CYENTS_E_INSUFFICIENT_DATA = 18,
  CYENTS_E_NOT_FOUND = 19,
  CYENTS_E_INTERNAL = 20
} cyents_status;

typedef struct cyents_store cyents_store;
typedef struct cyents_gazetteers cyents_gazetteers;
typedef struct cyents_model cyents_model;
typedef struct cyents_service cyents_service;

/* Message for the last failed call on this thread; "" when none. */
CYENTS_API const char* cyents_last_error(void);
CYENTS_API const char* cyents_status_name(cyents_status status);
CYENTS_API const char* cyents_version(void);

/* Every char** output is allocated by the library and released here. */
CYENTS_API void cyents_string_free(char* s);

/* 0 trace .. 6 off. */
CYENTS_API void cyents_set_log_level(int level);

/* Schema: version is "round1" or "round2". */
CYENTS_API cyents_status cyents_schema_export(const char* version, char** out_json);

/* Corpus store */
CYENTS_API cyents_status cyents_store_open(const char* root, int create, cyents_store** out);
CYENTS_API void cyents_store_close(cyents_store* store);
CYENTS_API cyents_status cyents_store_doc_ids(const cyents_store* store, char** out_json);
CYENTS_API cyents_status cyents_store_get(const cyents_store* store, const char* doc_id, char** out_json);
CYENTS_API cyents_status cyents_store_put(cyents_store* store, const char* doc_json);

/* Feed ingest. fixture_dir NULL means live HTTP with delay_seconds between
   requests. params_json (nullable) holds TextTiling parameters. */
CYENTS_API cyents_status cyents_ingest(cyents_store* store, const char* feeds_path, const char* fixture_dir,
                                       double delay_seconds, const char* params_json, char** out_report_json);

/* Builds a document from raw text. params_json may be NULL. */
CYENTS_API cyents_status cyents_segment_text(const char* doc_id, const char* text, const char* params_json,
                                             char** out_doc_json);
/* Re-segments every stored document in place. */
CYENTS_API cyents_status cyents_segment_store(cyents_store* store, const char* params_json, char** out_report_json);

/* Rule-based recognizers */
CYENTS_API cyents_status cyents_gazetteers_load(const char* dir, const char* version, cyents_gazetteers** out);
CYENTS_API void cyents_gazetteers_free(cyents_gazetteers* gazetteers);
CYENTS_API cyents_status cyents_match_text(const cyents_gazetteers* gazetteers, const char* text,
                                           char** out_spans_json);
/* doc_ids_json is a JSON array or NULL for every document. Output is JSONL
   with annotator "rules". */
CYENTS_API cyents_status cyents_prepopulate(const cyents_gazetteers* gazetteers, const cyents_store* store,
                                            const char* doc_ids_json, char** out_jsonl);

/* Annotation sets. Paths point to JSONL files. */
CYENTS_API cyents_status cyents_iaa(const char* const* a_paths, const char* const* b_paths, size_t pairs,
                                    const char* version, char** out_json);
CYENTS_API cyents_status cyents_merge(const char* const* paths, size_t count, const char* version,
                                      const char* out_path, char** out_summary_json);

/* Statistical tagger */
CYENTS_API cyents_status cyents_train(const cyents_store* store, const char* gold_path, const char* version,
                                      const char* config_json, cyents_model** out);
CYENTS_API cyents_status cyents_model_load(const char* path, cyents_model** out);
CYENTS_API cyents_status cyents_model_save(const cyents_model* model, const char* path);
CYENTS_API void cyents_model_free(cyents_model* model);
CYENTS_API cyents_status cyents_model_info(const cyents_model* model, char** out_json);
/* doc_ids_json is a JSON array or NULL for every document. Output is JSONL
   with annotator "model". */
CYENTS_API cyents_status cyents_extract(const cyents_model* model, const cyents_store* store,
                                        const char* doc_ids_json, char** out_jsonl);

/* Writes the templated synthetic corpus into the store and its gold
   annotations to train_gold_path and heldout_gold_path. params_json keys:
   train, heldout, seed, per_doc. */
CYENTS_API cyents_status cyents_synth(cyents_store* store, const char* params_json, const char* train_gold_path,
                                      const char* heldout_gold_path, char** out_summary_json);

/* Entity linking. Exactly one of fixture_dir and endpoint is non-NULL.
   config_json (nullable): {"weights": {...}, "relevant_types": path,
   "alternatives": n}. Output is JSONL with a "link" object per span. */
CYENTS_API cyents_status cyents_link(const char* pred_path, const cyents_store* store, const char* fixture_dir,
                                     const char* endpoint, const char* config_json, char** out_jsonl);

/* Evaluation. Either output may be NULL. */
CYENTS_API cyents_status cyents_eval(const char* gold_path, const char* pred_path, char** out_json,
                                     char** out_text);

/* Annotation service */
CYENTS_API cyents_status cyents_service_create(const cyents_store* store, const char* annotations_dir,
                                               const char* config_path, const char* gazetteer_dir,
                                               cyents_service** out);
/* Binds host:port (0 picks a free port) and writes the port to out_port. */
CYENTS_API cyents_status cyents_service_bind(cyents_service* service, const char* host, int port,
                                             const char* static_dir, int* out_port);
/* Blocks until cyents_service_stop. */
CYENTS_API cyents_status cyents_service_run(cyents_service* service);
CYENTS_API void cyents_service_stop(cyents_service* service);
CYENTS_API void cyents_service_free(cyents_service* service);

#ifdef __cplusplus
}
#endif

#endif
