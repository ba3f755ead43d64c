#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cyents {

class HttpClient;

struct ArticleRef {
  std::string feed_url;
  std::string article_url;
  std::string title;
  std::string published;  // as written in the feed
  bool operator==(const ArticleRef&) const = default;
};

// RSS 2.0, RSS 1.0 (RDF) and Atom. Entries come back in document order;
// entries without a link are dropped. Throws Error(kFeedParse).
std::vector<ArticleRef> parse_feed(std::string_view xml, const std::string& feed_url);

// Throws Error(kNetwork) on transport failure or a non-2xx status.
std::vector<ArticleRef> fetch_feed(const std::string& url, HttpClient& http);

}  // namespace cyents
