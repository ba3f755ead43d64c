#include "ingest/feeds.hpp"

#include <expat.h>

#include <memory>

#include "common/error.hpp"
#include "common/strings.hpp"
#include "ingest/http.hpp"
#include "spdlog/spdlog.h"

namespace cyents {
namespace {

std::string local_name(const char* qname) {
  std::string_view s(qname);
  const auto colon = s.rfind(':');
  return std::string(colon == std::string_view::npos ? s : s.substr(colon + 1));
}

struct FeedState {
  std::string feed_url;
  std::vector<ArticleRef> out;
  std::vector<std::string> stack;
  bool in_entry = false;
  std::size_t entry_depth = 0;
  ArticleRef current;
  std::string text;
  bool root_checked = false;
  bool is_feed = false;
};

void XMLCALL on_start(void* data, const char* name, const char** attrs) {
  auto* st = static_cast<FeedState*>(data);
  const std::string local = local_name(name);
  if (!st->root_checked) {
    st->root_checked = true;
    st->is_feed = local == "rss" || local == "feed" || local == "RDF";
  }
  st->stack.push_back(local);
  st->text.clear();
  if (!st->in_entry && (local == "item" || local == "entry")) {
    st->in_entry = true;
    st->entry_depth = st->stack.size();
    st->current = ArticleRef{st->feed_url, "", "", ""};
    return;
  }
  if (st->in_entry && st->stack.size() == st->entry_depth + 1 && local == "link") {
    std::string href, rel;
    for (std::size_t i = 0; attrs[i]; i += 2) {
      const std::string key = attrs[i];
      if (key == "href") href = attrs[i + 1];
      if (key == "rel") rel = attrs[i + 1];
    }
    if (!href.empty() && (rel.empty() || rel == "alternate") && st->current.article_url.empty()) {
      st->current.article_url = trim(href);
    }
  }
}

void XMLCALL on_end(void* data, const char*) {
  auto* st = static_cast<FeedState*>(data);
  const std::string local = st->stack.back();
  if (st->in_entry && st->stack.size() == st->entry_depth + 1) {
    const std::string value = collapse_whitespace(st->text);
    if (local == "title") {
      st->current.title = value;
    } else if (local == "link" && st->current.article_url.empty() && !value.empty()) {
      st->current.article_url = value;
    } else if ((local == "pubDate" || local == "published" || local == "date") && !value.empty()) {
      st->current.published = value;
    } else if (local == "updated" && st->current.published.empty()) {
      st->current.published = value;
    }
  }
  if (st->in_entry && st->stack.size() == st->entry_depth) {
    st->in_entry = false;
    if (st->current.article_url.empty()) {
      spdlog::warn("{}: entry '{}' has no link, skipped", st->feed_url, st->current.title);
    } else {
      st->out.push_back(st->current);
    }
  }
  st->stack.pop_back();
  st->text.clear();
}

void XMLCALL on_text(void* data, const char* s, int len) {
  static_cast<FeedState*>(data)->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

std::vector<ArticleRef> parse_feed(std::string_view xml, const std::string& feed_url) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr),
                                                                                       &XML_ParserFree);
  if (!parser) throw Error(ErrorCode::kInternal, "cannot create XML parser");
  FeedState st;
  st.feed_url = feed_url;
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw Error(ErrorCode::kFeedParse, feed_url + ": " + XML_ErrorString(XML_GetErrorCode(parser.get())) + " at line " +
                                           std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }
  if (!st.is_feed) throw Error(ErrorCode::kFeedParse, feed_url + ": root element is not rss, RDF or feed");
  return st.out;
}

std::vector<ArticleRef> fetch_feed(const std::string& url, HttpClient& http) {
  const auto res = http.get(url);
  if (res.status < 200 || res.status >= 300) {
    throw Error(ErrorCode::kNetwork, "GET " + url + " returned status " + std::to_string(res.status));
  }
  return parse_feed(res.body, url);
}

}  // namespace cyents
