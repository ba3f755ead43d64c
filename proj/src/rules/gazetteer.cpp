#include "rules/gazetteer.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "common/strings.hpp"
#include "common/utf8.hpp"
#include "schema/schema.hpp"
#include "text/document.hpp"

namespace cyents {

std::string normalize_gazetteer_term(std::string_view term) { return fold_case(collapse_whitespace(term)); }

Gazetteer Gazetteer::compile(std::string type_label, const std::vector<std::string>& entries) {
  Gazetteer g;
  g.type_label_ = std::move(type_label);
  for (const auto& e : entries) {
    std::string n = normalize_gazetteer_term(e);
    if (!n.empty()) g.entries_.push_back(std::move(n));
  }
  std::sort(g.entries_.begin(), g.entries_.end());
  g.entries_.erase(std::unique(g.entries_.begin(), g.entries_.end()), g.entries_.end());
  if (g.entries_.empty()) throw Error(ErrorCode::kEmptyGazetteer, "gazetteer for " + g.type_label_ + " has no entries");
  g.automaton_ = AhoCorasick(g.entries_);
  return g;
}

NormalizedTokens normalize_tokens(std::string_view source) {
  NormalizedTokens out;
  const auto spans = tokenize_bytes(source);
  OffsetMap map(source);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (i > 0 && spans[i].begin > spans[i - 1].end) out.text += ' ';
    out.norm_begin.push_back(out.text.size());
    out.text += fold_case(source.substr(spans[i].begin, spans[i].size()));
    out.norm_end.push_back(out.text.size());
    out.char_begin.push_back(map.to_char(spans[i].begin));
    out.char_end.push_back(map.to_char(spans[i].end));
  }
  return out;
}

std::vector<Mention> Gazetteer::match(std::string_view text) const {
  const NormalizedTokens norm = normalize_tokens(text);
  std::vector<int> token_starting(norm.text.size() + 1, -1), token_ending(norm.text.size() + 1, -1);
  for (std::size_t t = 0; t < norm.norm_begin.size(); ++t) {
    token_starting[norm.norm_begin[t]] = static_cast<int>(t);
    token_ending[norm.norm_end[t]] = static_cast<int>(t);
  }
  std::vector<Mention> candidates;
  for (const auto& hit : automaton_.find_all(norm.text)) {
    const std::size_t begin = hit.end - automaton_.pattern_length(hit.pattern);
    const int first = token_starting[begin];
    const int last = token_ending[hit.end];
    if (first < 0 || last < 0) continue;
    candidates.push_back(Mention{norm.char_begin[first], norm.char_end[last], type_label_, Provenance::kRule, 1.0});
  }
  return resolve_leftmost_longest(std::move(candidates));
}

std::vector<Mention> Gazetteer::match(const Document& doc) const { return match(std::string_view(doc.text)); }

std::vector<Gazetteer> load_gazetteers(const std::string& dir, const Schema& schema) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, "gazetteer directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::map<std::string, std::vector<std::string>> by_type;
  for (const auto& file : files) {
    const auto lines = split_lines(read_file(file.string()));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string line = trim(lines[i]);
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw LineError(ErrorCode::kParse, i + 1, file.string() + ": expected term<TAB>type");
      const std::string term = trim(std::string_view(line).substr(0, tab));
      const std::string type = trim(std::string_view(line).substr(tab + 1));
      const EntityType* et = schema.find(type);
      if (et == nullptr) {
        // Round-1 schemas lack some round-2 gazetteer types; skip them.
        spdlog::debug("{}:{}: type {} not in {}; skipped", file.string(), i + 1, type, to_string(schema.id()));
        continue;
      }
      if (et->category != Category::kGazetteer)
        throw LineError(ErrorCode::kUnknownLabel, i + 1, file.string() + ": type " + type + " is not a gazetteer type");
      by_type[type].push_back(term);
    }
  }
  std::vector<Gazetteer> out;
  for (const auto& [type, terms] : by_type) out.push_back(Gazetteer::compile(type, terms));
  return out;
}

}  // namespace cyents
