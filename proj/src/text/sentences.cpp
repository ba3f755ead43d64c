#include <array>
#include <string_view>

#include "common/strings.hpp"
#include "common/utf8.hpp"
#include "text/document.hpp"

namespace cyents {

namespace {

constexpr std::array<std::string_view, 20> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "inc", "ltd", "co", "corp", "jr",
    "sr", "st", "vs", "etc", "e.g", "i.e", "fig", "no", "approx", "u.s",
};

bool is_terminal(std::string_view tok) {
  return tok == "." || tok == "!" || tok == "?" || tok == "\xE2\x80\xA6";  // U+2026
}

bool is_closer(std::string_view tok) {
  return tok == ")" || tok == "]" || tok == "\"" || tok == "'" || tok == "\xE2\x80\x9D" || tok == "\xE2\x80\x99";
}

bool is_opener(std::string_view tok) {
  return tok == "(" || tok == "[" || tok == "\"" || tok == "'" || tok == "\xE2\x80\x9C" || tok == "\xE2\x80\x98";
}

bool starts_sentence(std::string_view tok) {
  return !tok.empty() && (is_ascii_upper(tok[0]) || is_ascii_digit(tok[0]));
}

bool is_abbreviation(std::string_view tok) {
  const std::string folded = fold_case(tok);
  for (auto a : kAbbreviations)
    if (folded == a) return true;
  // Single-letter initials ("J. Smith").
  return tok.size() == 1 && is_ascii_upper(tok[0]);
}

}  // namespace

std::vector<CharRange> split_sentences(std::string_view text) {
  const auto toks = tokenize_bytes(text);
  std::vector<CharRange> out;
  if (toks.empty()) return out;

  OffsetMap map(text);
  auto surface = [&](std::size_t i) { return text.substr(toks[i].begin, toks[i].size()); };
  auto gap_has_space = [&](std::size_t i) { return toks[i].end < toks[i + 1].begin; };

  std::size_t first = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!is_terminal(surface(i))) continue;
    if (i > 0 && surface(i) == "." && !gap_has_space(i - 1) && is_abbreviation(surface(i - 1))) continue;
    std::size_t last = i;
    while (last + 1 < toks.size() && !gap_has_space(last) && (is_closer(surface(last + 1)) || is_terminal(surface(last + 1))))
      ++last;
    if (last + 1 >= toks.size() || !gap_has_space(last)) {
      i = last;
      continue;
    }
    std::size_t next = last + 1;
    bool boundary = starts_sentence(surface(next));
    if (!boundary && is_opener(surface(next)) && next + 1 < toks.size()) boundary = starts_sentence(surface(next + 1));
    if (boundary) {
      out.push_back({map.to_char(toks[first].begin), map.to_char(toks[last].end)});
      first = last + 1;
    }
    i = last;
  }
  if (first < toks.size()) out.push_back({map.to_char(toks[first].begin), map.to_char(toks.back().end)});
  return out;
}

}  // namespace cyents
