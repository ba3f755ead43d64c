#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rules/aho_corasick.hpp"
#include "rules/mention.hpp"

namespace cyents {

class Schema;
struct Document;

// Case-fold and collapse internal whitespace.
std::string normalize_gazetteer_term(std::string_view term);

// A term list for one entity type, compiled into a multi-pattern automaton.
class Gazetteer {
 public:
  // Throws Error(kEmptyGazetteer) when no entry survives normalization.
  static Gazetteer compile(std::string type_label, const std::vector<std::string>& entries);

  const std::string& type_label() const { return type_label_; }
  // Normalized, sorted, unique.
  const std::vector<std::string>& entries() const { return entries_; }
  const AhoCorasick& automaton() const { return automaton_; }

  // Case-insensitive, token-aligned, leftmost-longest.
  std::vector<Mention> match(std::string_view text) const;
  std::vector<Mention> match(const Document& doc) const;

 private:
  std::string type_label_;
  std::vector<std::string> entries_;
  AhoCorasick automaton_;
};

// Token-aligned, case-folded view of a text. Tokens separated by whitespace
// in the source are joined by one space; adjacent tokens are concatenated.
struct NormalizedTokens {
  std::string text;
  std::vector<std::size_t> norm_begin, norm_end;  // per token, in `text`
  std::vector<std::size_t> char_begin, char_end;  // per token, in the source
};
NormalizedTokens normalize_tokens(std::string_view source);

// Reads every *.tsv file in `dir` (term<TAB>type, '#' comments) and builds
// one gazetteer per type, sorted by type label. Types must exist in `schema`
// with the gazetteer category.
std::vector<Gazetteer> load_gazetteers(const std::string& dir, const Schema& schema);

}  // namespace cyents
