#include "ingest/store.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/strings.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace cyents {

std::string doc_id_from_url(const std::string& url) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(murmur64a(url, 0x5EED)));
  return std::string("doc-") + buf;
}

bool is_valid_doc_id(const std::string& id) {
  if (id.empty() || id[0] == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) { return is_ascii_alnum(c) || c == '-' || c == '_' || c == '.'; });
}

CorpusStore CorpusStore::open(const std::string& root, bool create) {
  CorpusStore s;
  s.root_ = root;
  std::error_code ec;
  if (!fs::is_directory(root + "/docs")) {
    if (!create) throw Error(ErrorCode::kNotFound, "no corpus store at " + root);
    fs::create_directories(root + "/docs", ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + root + "/docs: " + ec.message());
  }
  const std::string index = root + "/index.json";
  if (fs::exists(index)) {
    try {
      s.index_ = nlohmann::json::parse(read_file(index)).get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, index + ": " + e.what());
    }
  } else if (create) {
    s.save_index();
  }
  return s;
}

std::optional<std::string> CorpusStore::doc_id_for_url(const std::string& url) const {
  const auto it = index_.find(url);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string CorpusStore::doc_path(const std::string& doc_id) const { return root_ + "/docs/" + doc_id + ".jsonl"; }

std::vector<std::string> CorpusStore::doc_ids() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_ + "/docs")) {
    if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
    ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool CorpusStore::contains(const std::string& doc_id) const {
  return is_valid_doc_id(doc_id) && fs::is_regular_file(doc_path(doc_id));
}

Document CorpusStore::load(const std::string& doc_id) const {
  if (!contains(doc_id)) throw Error(ErrorCode::kNotFound, "document " + doc_id + " not in store " + root_);
  const std::string path = doc_path(doc_id);
  try {
    return Document::from_json(nlohmann::json::parse(trim(read_file(path))));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

std::vector<Document> CorpusStore::load_all() const {
  std::vector<Document> docs;
  for (const auto& id : doc_ids()) docs.push_back(load(id));
  return docs;
}

std::map<std::string, std::size_t> CorpusStore::lengths() const {
  std::map<std::string, std::size_t> out;
  for (const auto& d : load_all()) out[d.doc_id] = d.length();
  return out;
}

void CorpusStore::put(const Document& doc) {
  if (!is_valid_doc_id(doc.doc_id)) throw Error(ErrorCode::kInvalidArgument, "invalid doc id: " + doc.doc_id);
  doc.validate();
  write_file_atomic(doc_path(doc.doc_id), doc.to_json().dump() + "\n");
  if (doc.source_url && index_[*doc.source_url] != doc.doc_id) {
    index_[*doc.source_url] = doc.doc_id;
    save_index();
  }
}

void CorpusStore::save_index() const { write_file_atomic(root_ + "/index.json", nlohmann::json(index_).dump(2) + "\n"); }

}  // namespace cyents
