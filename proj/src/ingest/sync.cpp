#include "ingest/sync.hpp"

#include <set>

#include "common/error.hpp"
#include "common/strings.hpp"
#include "ingest/extract.hpp"
#include "ingest/feeds.hpp"
#include "ingest/http.hpp"
#include "ingest/store.hpp"
#include "spdlog/spdlog.h"

namespace cyents {

nlohmann::json SyncReport::to_json() const { return {{"added", added}, {"skipped", skipped}, {"errors", errors}}; }

SyncReport sync(CorpusStore& store, const std::vector<std::string>& feeds, HttpClient& http,
                const TextTilingParams& params) {
  SyncReport report;
  auto record = [&](const std::string& msg) {
    spdlog::warn("{}", msg);
    report.errors.push_back(msg);
  };
  for (const auto& feed : feeds) {
    std::vector<ArticleRef> refs;
    try {
      refs = fetch_feed(feed, http);
    } catch (const Error& e) {
      record("feed " + feed + ": " + e.what());
      continue;
    }
    for (const auto& ref : refs) {
      if (store.contains_url(ref.article_url)) {
        ++report.skipped;
        continue;
      }
      try {
        const auto res = http.get(ref.article_url);
        if (res.status < 200 || res.status >= 300) {
          throw Error(ErrorCode::kNetwork, "status " + std::to_string(res.status));
        }
        const std::string text = extract_article(res.body);
        store.put(make_document(doc_id_from_url(ref.article_url), text, ref.article_url, params));
        ++report.added;
        spdlog::info("added {} ({})", ref.article_url, ref.title);
      } catch (const Error& e) {
        record("article " + ref.article_url + ": " + e.what());
      }
    }
  }
  return report;
}

std::vector<std::string> read_feed_list(const std::string& path) {
  std::vector<std::string> feeds;
  for (const auto& line : split_lines(read_file(path))) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    feeds.push_back(t);
  }
  return feeds;
}

}  // namespace cyents
