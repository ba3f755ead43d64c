#include "ingest/http.hpp"

#include <thread>

#include "common/error.hpp"
#include "common/strings.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cyents {

UrlParts split_url(const std::string& url) {
  UrlParts u;
  const auto sep = url.find("://");
  if (sep == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "not an absolute URL: " + url);
  u.scheme = fold_case(url.substr(0, sep));
  if (u.scheme != "http" && u.scheme != "https") throw Error(ErrorCode::kInvalidArgument, "unsupported scheme: " + url);
  const std::size_t host_start = sep + 3;
  const std::size_t path_start = url.find_first_of("/?#", host_start);
  std::string authority = url.substr(host_start, path_start == std::string::npos ? std::string::npos : path_start - host_start);
  u.target = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (const auto hash = u.target.find('#'); hash != std::string::npos) u.target.erase(hash);
  if (u.target.empty() || u.target[0] != '/') u.target.insert(0, "/");
  u.port = u.scheme == "https" ? 443 : 80;
  const auto colon = authority.rfind(':');
  if (colon != std::string::npos && authority.find(']') == std::string::npos) {
    try {
      u.port = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in URL: " + url);
    }
    authority.erase(colon);
  }
  if (authority.empty()) throw Error(ErrorCode::kInvalidArgument, "missing host: " + url);
  u.host = authority;
  return u;
}

FixtureHttpClient::FixtureHttpClient(std::string dir) : dir_(std::move(dir)) {
  try {
    const auto j = nlohmann::json::parse(read_file(dir_ + "/index.json"));
    index_ = j.get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "fixture index " + dir_ + "/index.json: " + e.what());
  }
}

HttpResponse FixtureHttpClient::get(const std::string& url) {
  const auto it = index_.find(url);
  if (it == index_.end()) return {404, ""};
  return {200, read_file(dir_ + "/" + it->second)};
}

LiveHttpClient::LiveHttpClient(std::chrono::milliseconds delay, std::chrono::seconds timeout)
    : delay_(delay), timeout_(timeout) {}

HttpResponse LiveHttpClient::get(const std::string& url) {
  if (!first_) {
    const auto wait = last_ + delay_ - std::chrono::steady_clock::now();
    if (wait > std::chrono::steady_clock::duration::zero()) std::this_thread::sleep_for(wait);
  }
  first_ = false;
  const UrlParts u = split_url(url);
  httplib::Client client(u.scheme + "://" + u.host + ":" + std::to_string(u.port));
  client.set_follow_location(true);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_default_headers({{"User-Agent", "cyents/1.0 (corpus collection)"}});
  auto res = client.Get(u.target);
  last_ = std::chrono::steady_clock::now();
  if (!res) throw Error(ErrorCode::kNetwork, "GET " + url + ": " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

}  // namespace cyents
