#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "text/document.hpp"

namespace cyents {

class CorpusStore;
class HttpClient;

struct SyncReport {
  std::size_t added = 0;
  std::size_t skipped = 0;
  std::vector<std::string> errors;
  nlohmann::json to_json() const;
};

// Fetches every feed and stores each article not already indexed. Failures
// of single feeds or articles are recorded in `errors` and do not stop the
// run.
SyncReport sync(CorpusStore& store, const std::vector<std::string>& feeds, HttpClient& http,
                const TextTilingParams& params = {});

// One URL per line; blank lines and '#' comments ignored.
std::vector<std::string> read_feed_list(const std::string& path);

}  // namespace cyents
