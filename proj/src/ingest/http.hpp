#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

namespace cyents {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Blocking GET. Transport failures throw Error(kNetwork); HTTP error statuses
// are returned, not thrown.
class HttpClient {
 public:
  virtual ~HttpClient() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

// Serves responses from a directory: `index.json` maps each URL to a file
// relative to the directory. Unlisted URLs answer 404.
class FixtureHttpClient : public HttpClient {
 public:
  explicit FixtureHttpClient(std::string dir);
  HttpResponse get(const std::string& url) override;

 private:
  std::string dir_;
  std::map<std::string, std::string> index_;
};

// Real network access, following redirects, with a pause between requests.
class LiveHttpClient : public HttpClient {
 public:
  explicit LiveHttpClient(std::chrono::milliseconds delay = std::chrono::milliseconds(1000),
                          std::chrono::seconds timeout = std::chrono::seconds(20));
  HttpResponse get(const std::string& url) override;

 private:
  std::chrono::milliseconds delay_;
  std::chrono::seconds timeout_;
  std::chrono::steady_clock::time_point last_{};
  bool first_ = true;
};

struct UrlParts {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string target;  // path and query, at least "/"
};
// Throws Error(kInvalidArgument) for anything but absolute http(s) URLs.
UrlParts split_url(const std::string& url);

}  // namespace cyents
