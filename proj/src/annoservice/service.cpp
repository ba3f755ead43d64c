#include "annoservice/service.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "common/rng.hpp"
#include "common/strings.hpp"
#include "rules/patterns.hpp"
#include "spdlog/spdlog.h"

namespace cyents {
namespace fs = std::filesystem;

ServiceConfig ServiceConfig::from_json(const nlohmann::json& j) {
  ServiceConfig c;
  try {
    c.schema = parse_schema_id(j.value("schema", std::string("round2")));
    for (const auto& [name, g] : j.at("groups").items()) {
      Group group;
      group.annotators = g.at("annotators").get<std::vector<std::string>>();
      if (g.contains("docs")) group.docs = g["docs"].get<std::vector<std::string>>();
      if (g.contains("sample")) {
        group.sample_count = g["sample"].at("count").get<std::size_t>();
        group.sample_seed = g["sample"].value("seed", std::uint64_t{1});
      }
      c.groups.emplace(name, std::move(group));
    }
    c.tokens = j.value("tokens", std::map<std::string, std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("service config: ") + e.what());
  }
  std::set<std::string> seen;
  for (const auto& [name, g] : c.groups) {
    if (g.annotators.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "group " + name + " must have exactly two annotators");
    }
    for (const auto& a : g.annotators) {
      if (!is_valid_doc_id(a)) throw Error(ErrorCode::kInvalidArgument, "invalid annotator id '" + a + "'");
      if (!seen.insert(a).second) throw Error(ErrorCode::kInvalidArgument, "annotator " + a + " is in two groups");
    }
  }
  for (const auto& [a, t] : c.tokens) {
    if (!seen.count(a)) throw Error(ErrorCode::kInvalidArgument, "token for unknown annotator " + a);
  }
  return c;
}

ServiceConfig ServiceConfig::load(const std::string& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

namespace {

std::string describe(const std::vector<SpanProblem>& problems) {
  std::string s = std::to_string(problems.size()) + " invalid span(s)";
  for (const auto& p : problems) s += "; #" + std::to_string(p.index) + ": " + p.reason;
  return s;
}

}  // namespace

ValidationError::ValidationError(std::vector<SpanProblem> problems)
    : Error(ErrorCode::kValidation, describe(problems)), problems_(std::move(problems)) {}

nlohmann::json SubmitAck::to_json() const {
  return {{"ok", true}, {"annotator", annotator}, {"doc_id", doc_id}, {"spans", spans}, {"replaced", replaced}};
}

AnnotationService::AnnotationService(const CorpusStore& store, std::string annotations_dir, ServiceConfig config,
                                     std::vector<Gazetteer> gazetteers)
    : dir_(std::move(annotations_dir)),
      config_(std::move(config)),
      schema_(&Schema::get(config_.schema)),
      gazetteers_(std::move(gazetteers)) {
  fs::create_directories(dir_);
  const auto all = store.doc_ids();
  for (const auto& [name, g] : config_.groups) {
    std::vector<std::string> docs;
    if (g.docs) {
      docs = *g.docs;
    } else {
      docs = all;
      if (g.sample_count) {
        Rng rng(g.sample_seed);
        rng.shuffle(docs);
        docs.resize(std::min(docs.size(), *g.sample_count));
      }
    }
    for (const auto& id : docs) {
      if (!docs_.count(id)) {
        docs_.emplace(id, store.load(id));
        lengths_[id] = docs_.at(id).length();
      }
    }
    for (const auto& a : g.annotators) assignments_[a] = docs;
  }

  auto state = std::make_shared<State>();
  const SpanChecks checks{schema_, &lengths_};
  for (const auto& [annotator, docs] : assignments_) {
    AnnotationSet set;
    const std::string path = file_for(annotator);
    if (fs::exists(path)) {
      set = load_jsonl(path, checks);
      if (!set.entries.empty() && set.annotator_id != annotator) {
        throw Error(ErrorCode::kParse, path + ": annotator " + set.annotator_id + " does not match file name");
      }
      spdlog::info("restored {} completed document(s) for {}", set.entries.size(), annotator);
    }
    set.annotator_id = annotator;
    state->sets.emplace(annotator, std::move(set));
  }
  state_ = std::move(state);
}

std::string AnnotationService::file_for(const std::string& annotator) const {
  return (fs::path(dir_) / (annotator + ".jsonl")).string();
}

std::shared_ptr<const AnnotationService::State> AnnotationService::snapshot() const {
  std::shared_lock lock(snapshot_mu_);
  return state_;
}

bool AnnotationService::authorized(const std::string& annotator, const std::string& token) const {
  const auto it = config_.tokens.find(annotator);
  return it == config_.tokens.end() || it->second == token;
}

const std::vector<std::string>& AnnotationService::assignments(const std::string& annotator) const {
  const auto it = assignments_.find(annotator);
  if (it == assignments_.end()) throw Error(ErrorCode::kUnknownAnnotator, "unknown annotator '" + annotator + "'");
  return it->second;
}

nlohmann::json AnnotationService::next_task(const std::string& annotator) const {
  const auto& docs = assignments(annotator);
  const auto state = snapshot();
  const auto& done = state->sets.at(annotator).entries;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (done.count(docs[i])) continue;
    const Document& doc = docs_.at(docs[i]);
    const AnnotationSet pre = prepopulate(doc, gazetteers_);
    return {{"done", false},
            {"position", i},
            {"total", docs.size()},
            {"doc", doc.to_json()},
            {"pre_annotations",
             {{"doc_id", doc.doc_id}, {"annotator", pre.annotator_id}, {"spans", spans_to_json(pre.entries.at(doc.doc_id))}}}};
  }
  return {{"done", true}, {"total", docs.size()}};
}

const Document& AnnotationService::document(const std::string& doc_id) const {
  const auto it = docs_.find(doc_id);
  if (it == docs_.end()) throw Error(ErrorCode::kNotFound, "unknown document '" + doc_id + "'");
  return it->second;
}

SubmitAck AnnotationService::submit(const std::string& annotator, const std::string& doc_id,
                                    const std::vector<Mention>& spans) {
  const auto& docs = assignments(annotator);
  if (std::find(docs.begin(), docs.end(), doc_id) == docs.end()) {
    throw Error(ErrorCode::kNotFound, "document '" + doc_id + "' is not assigned to " + annotator);
  }
  auto problems = check_spans(spans, lengths_.at(doc_id), schema_);
  if (!problems.empty()) throw ValidationError(std::move(problems));

  std::vector<Mention> sorted = spans;
  std::sort(sorted.begin(), sorted.end(), mention_less);

  std::lock_guard writer(writer_mu_);
  auto next = std::make_shared<State>(*snapshot());
  AnnotationSet& set = next->sets.at(annotator);
  SubmitAck ack{annotator, doc_id, sorted.size(), set.entries.count(doc_id) > 0};
  set.entries[doc_id] = std::move(sorted);
  save_jsonl(set, file_for(annotator));
  if (ack.replaced) spdlog::info("{} resubmitted {}; previous spans replaced", annotator, doc_id);
  {
    std::unique_lock lock(snapshot_mu_);
    state_ = std::move(next);
  }
  return ack;
}

IAAReport AnnotationService::iaa_status(const std::string& group) const {
  const auto it = config_.groups.find(group);
  if (it == config_.groups.end()) throw Error(ErrorCode::kNotFound, "unknown group '" + group + "'");
  const auto state = snapshot();
  const AnnotationSet& a = state->sets.at(it->second.annotators[0]);
  const AnnotationSet& b = state->sets.at(it->second.annotators[1]);
  std::vector<std::string> common;
  for (const auto& [doc_id, spans] : a.entries) {
    if (b.entries.count(doc_id)) common.push_back(doc_id);
  }
  if (common.empty()) {
    throw Error(ErrorCode::kInsufficientData, "group " + group + " has no document completed by both annotators");
  }
  return agreement(restrict_docs(a, common), restrict_docs(b, common));
}

AnnotationSet AnnotationService::annotations(const std::string& annotator) const {
  assignments(annotator);
  return snapshot()->sets.at(annotator);
}

}  // namespace cyents
