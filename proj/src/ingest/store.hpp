#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "text/document.hpp"

namespace cyents {

// Directory-backed corpus: docs/<doc_id>.jsonl holds one document per file,
// index.json maps article URLs to doc ids. Not safe for concurrent writers.
class CorpusStore {
 public:
  // Creates the layout when `create` is set; otherwise throws kNotFound for a
  // missing store.
  static CorpusStore open(const std::string& root, bool create = true);

  const std::string& root() const { return root_; }
  std::optional<std::string> doc_id_for_url(const std::string& url) const;
  bool contains_url(const std::string& url) const { return index_.count(url) > 0; }
  const std::map<std::string, std::string>& url_index() const { return index_; }

  std::vector<std::string> doc_ids() const;
  bool contains(const std::string& doc_id) const;
  Document load(const std::string& doc_id) const;  // throws kNotFound
  std::vector<Document> load_all() const;
  std::map<std::string, std::size_t> lengths() const;

  // Validates, writes atomically, and records the URL if present.
  void put(const Document& doc);

 private:
  std::string doc_path(const std::string& doc_id) const;
  void save_index() const;

  std::string root_;
  std::map<std::string, std::string> index_;
};

// Stable id for an article URL.
std::string doc_id_from_url(const std::string& url);

// Letters, digits, '-', '_' and '.', not starting with '.'.
bool is_valid_doc_id(const std::string& id);

}  // namespace cyents
