#include "linker/candidates.hpp"

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <set>

#include "common/error.hpp"
#include "common/strings.hpp"
#include "ingest/http.hpp"

namespace cyents {

bool is_valid_qid(const std::string& qid) {
  return qid.size() >= 2 && qid[0] == 'Q' && qid[1] != '0' &&
         std::all_of(qid.begin() + 1, qid.end(), is_ascii_digit);
}

std::uint64_t qid_number(const std::string& qid) { return is_valid_qid(qid) ? std::stoull(qid.substr(1)) : 0; }

nlohmann::json LinkCandidate::to_json() const {
  nlohmann::json j = {{"qid", qid},     {"label", label}, {"aliases", aliases}, {"description", description},
                      {"types", types}, {"prominence", prominence}};
  j["abstract_first_sentence"] = abstract_first_sentence ? nlohmann::json(*abstract_first_sentence) : nlohmann::json();
  return j;
}

LinkCandidate LinkCandidate::from_json(const nlohmann::json& j) {
  LinkCandidate c;
  try {
    c.qid = j.at("qid").get<std::string>();
    c.label = j.value("label", "");
    c.aliases = j.value("aliases", std::vector<std::string>{});
    c.description = j.value("description", "");
    c.types = j.value("types", std::vector<std::string>{});
    const auto prom = j.value("prominence", 0LL);
    if (prom < 0) throw Error(ErrorCode::kClient, "negative prominence for " + c.qid);
    c.prominence = static_cast<std::uint64_t>(prom);
    if (j.contains("abstract_first_sentence") && j["abstract_first_sentence"].is_string()) {
      c.abstract_first_sentence = j["abstract_first_sentence"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kClient, std::string("malformed candidate: ") + e.what());
  }
  if (!is_valid_qid(c.qid)) throw Error(ErrorCode::kClient, "invalid qid " + c.qid);
  return c;
}

FixtureCandidateClient::FixtureCandidateClient(std::string dir) : dir_(std::move(dir)) {
  const std::string path = dir_ + "/manifest.json";
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kClient, "no fixture manifest at " + path);
  try {
    manifest_ = nlohmann::json::parse(read_file(path)).get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kClient, path + ": " + e.what());
  }
}

std::vector<LinkCandidate> FixtureCandidateClient::search(const std::string& surface) {
  const auto it = manifest_.find(surface);
  if (it == manifest_.end()) throw Error(ErrorCode::kClient, "no recorded response for query '" + surface + "'");
  const std::string path = dir_ + "/" + it->second;
  std::string body;
  try {
    body = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kClient, e.what());
  }
  std::vector<LinkCandidate> out;
  try {
    const auto j = nlohmann::json::parse(body);
    for (const auto& c : j.at("candidates")) out.push_back(LinkCandidate::from_json(c));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kClient, path + ": " + e.what());
  }
  return out;
}

std::string url_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (is_ascii_alnum(static_cast<char>(c)) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

WikidataClient::WikidataClient(HttpClient& http, std::string endpoint, std::size_t limit)
    : http_(http), endpoint_(std::move(endpoint)), limit_(limit) {}

nlohmann::json WikidataClient::get_json(const std::string& url) {
  HttpResponse res;
  try {
    res = http_.get(url);
  } catch (const Error& e) {
    throw Error(ErrorCode::kClient, e.what());
  }
  if (res.status != 200) throw Error(ErrorCode::kClient, "GET " + url + " returned status " + std::to_string(res.status));
  try {
    auto j = nlohmann::json::parse(res.body);
    if (j.contains("error")) throw Error(ErrorCode::kClient, "API error: " + j["error"].dump());
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kClient, "malformed response from " + url + ": " + e.what());
  }
}

namespace {

std::vector<std::string> claim_targets(const nlohmann::json& entity, const char* property) {
  std::vector<std::string> out;
  if (!entity.contains("claims") || !entity["claims"].contains(property)) return out;
  for (const auto& claim : entity["claims"][property]) {
    const auto& snak = claim.value("mainsnak", nlohmann::json::object());
    if (!snak.contains("datavalue")) continue;
    const auto& value = snak["datavalue"].value("value", nlohmann::json::object());
    if (value.contains("id")) out.push_back(value["id"].get<std::string>());
  }
  return out;
}

std::string join_ids(const std::vector<std::string>& ids, std::size_t from, std::size_t to) {
  std::string s;
  for (std::size_t i = from; i < to; ++i) s += (i == from ? "" : "|") + ids[i];
  return s;
}

}  // namespace

std::vector<LinkCandidate> WikidataClient::search(const std::string& surface) {
  if (surface.empty()) throw Error(ErrorCode::kInvalidArgument, "empty search surface");
  const auto found = get_json(endpoint_ + "?action=wbsearchentities&format=json&language=en&uselang=en&type=item&limit=" +
                              std::to_string(limit_) + "&search=" + url_encode(surface));
  std::vector<std::string> ids;
  const auto hits = found.value("search", nlohmann::json::array());
  for (const auto& hit : hits) ids.push_back(hit.at("id").get<std::string>());
  if (ids.empty()) return {};

  // wbgetentities accepts 50 ids per call.
  auto fetch = [&](const std::vector<std::string>& want, const std::string& props) {
    nlohmann::json merged = nlohmann::json::object();
    for (std::size_t i = 0; i < want.size(); i += 50) {
      const auto j = get_json(endpoint_ + "?action=wbgetentities&format=json&languages=en&props=" + url_encode(props) +
                              "&ids=" + url_encode(join_ids(want, i, std::min(want.size(), i + 50))));
      const auto entities = j.value("entities", nlohmann::json::object());
      for (const auto& [id, e] : entities.items()) merged[id] = e;
    }
    return merged;
  };
  const auto entities = fetch(ids, "labels|aliases|descriptions|claims|sitelinks");

  std::set<std::string> direct;
  for (const auto& id : ids) {
    if (entities.contains(id)) {
      for (auto& t : claim_targets(entities[id], "P31")) direct.insert(t);
    }
  }
  std::map<std::string, std::vector<std::string>> supers;
  if (!direct.empty()) {
    const auto type_entities = fetch({direct.begin(), direct.end()}, "claims");
    for (const auto& t : direct) {
      if (type_entities.contains(t)) supers[t] = claim_targets(type_entities[t], "P279");
    }
  }

  std::vector<LinkCandidate> out;
  for (const auto& id : ids) {
    if (!entities.contains(id)) continue;
    const auto& e = entities[id];
    LinkCandidate c;
    c.qid = id;
    if (e.contains("labels") && e["labels"].contains("en")) c.label = e["labels"]["en"].value("value", "");
    if (e.contains("descriptions") && e["descriptions"].contains("en")) {
      c.description = e["descriptions"]["en"].value("value", "");
    }
    if (e.contains("aliases") && e["aliases"].contains("en")) {
      for (const auto& a : e["aliases"]["en"]) c.aliases.push_back(a.value("value", ""));
    }
    std::set<std::string> types;
    for (const auto& t : claim_targets(e, "P31")) {
      types.insert(t);
      for (const auto& s : supers[t]) types.insert(s);
    }
    c.types.assign(types.begin(), types.end());
    c.prominence = e.contains("sitelinks") ? e["sitelinks"].size() : 0;
    if (is_valid_qid(c.qid)) out.push_back(std::move(c));
  }
  return out;
}

std::vector<LinkCandidate> CachedClient::search(const std::string& surface) {
  {
    std::shared_lock lock(mu_);
    const auto it = cache_.find(surface);
    if (it != cache_.end()) return it->second;
  }
  auto result = inner_.search(surface);
  std::unique_lock lock(mu_);
  cache_.emplace(surface, result);
  return result;
}

}  // namespace cyents
