#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "annotations/agreement.hpp"
#include "annotations/io.hpp"
#include "ingest/store.hpp"
#include "rules/gazetteer.hpp"
#include "schema/schema.hpp"

namespace cyents {

// Static study configuration:
// {"schema": "round2",
//  "groups": {"g1": {"annotators": ["alice", "bob"], "docs": ["doc-..."]}},
//  "tokens": {"alice": "..."}}
// A group without "docs" gets every stored document, or a seeded sample when
// it has "sample": {"count": n, "seed": s}.
struct ServiceConfig {
  struct Group {
    std::vector<std::string> annotators;
    std::optional<std::vector<std::string>> docs;
    std::optional<std::size_t> sample_count;
    std::uint64_t sample_seed = 1;
  };
  SchemaId schema = SchemaId::kRound2;
  std::map<std::string, Group> groups;
  std::map<std::string, std::string> tokens;

  static ServiceConfig from_json(const nlohmann::json& j);
  static ServiceConfig load(const std::string& path);
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<SpanProblem> problems);
  const std::vector<SpanProblem>& problems() const { return problems_; }

 private:
  std::vector<SpanProblem> problems_;
};

struct SubmitAck {
  std::string annotator;
  std::string doc_id;
  std::size_t spans = 0;
  bool replaced = false;
  nlohmann::json to_json() const;
};

class AnnotationService {
 public:
  // Loads every assigned document and any annotation files already in
  // `annotations_dir` (one <annotator>.jsonl per annotator).
  AnnotationService(const CorpusStore& store, std::string annotations_dir, ServiceConfig config,
                    std::vector<Gazetteer> gazetteers);

  const Schema& schema() const { return *schema_; }
  const ServiceConfig& config() const { return config_; }

  // True when the annotator has no token configured or the token matches.
  bool authorized(const std::string& annotator, const std::string& token) const;

  // Ordered document list for an annotator; throws kUnknownAnnotator.
  const std::vector<std::string>& assignments(const std::string& annotator) const;

  // {"done": false, "doc": ..., "pre_annotations": {...}, "position": i, "total": n} or {"done": true, ...}.
  nlohmann::json next_task(const std::string& annotator) const;

  // Throws kNotFound.
  const Document& document(const std::string& doc_id) const;

  // Validates, writes the annotator's file, then acknowledges. Throws
  // ValidationError, kUnknownAnnotator, or kNotFound for an unassigned doc.
  SubmitAck submit(const std::string& annotator, const std::string& doc_id, const std::vector<Mention>& spans);

  // Agreement over the documents both members have completed. Throws
  // kNotFound for an unknown group and kInsufficientData without common docs.
  IAAReport iaa_status(const std::string& group) const;

  AnnotationSet annotations(const std::string& annotator) const;

 private:
  struct State {
    std::map<std::string, AnnotationSet> sets;
  };
  std::shared_ptr<const State> snapshot() const;
  std::string file_for(const std::string& annotator) const;

  std::string dir_;
  ServiceConfig config_;
  const Schema* schema_;
  std::vector<Gazetteer> gazetteers_;
  std::map<std::string, std::vector<std::string>> assignments_;
  std::map<std::string, Document> docs_;
  std::map<std::string, std::size_t> lengths_;

  mutable std::shared_mutex snapshot_mu_;
  std::shared_ptr<const State> state_;
  std::mutex writer_mu_;
};

}  // namespace cyents
