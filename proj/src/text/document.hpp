#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "text/tokenizer.hpp"

namespace cyents {

// Character range [start, end).
struct CharRange {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const CharRange&) const = default;
};

// Sentence index range [first, last).
struct SentenceRange {
  std::size_t first = 0;
  std::size_t last = 0;

  bool operator==(const SentenceRange&) const = default;
};

struct TextTilingParams {
  std::size_t window_w = 20;
  std::size_t block_k = 6;
  double depth_cutoff_multiplier = 0.5;
};

struct Document {
  std::string doc_id;
  std::string text;  // UTF-8, never contains '\n' or '\r'
  std::optional<std::string> source_url;
  std::vector<CharRange> sentences;
  std::vector<SentenceRange> paragraphs;

  std::size_t length() const;  // in characters

  // Throws Error(kValidation) describing the first broken invariant.
  void validate() const;

  nlohmann::json to_json() const;
  static Document from_json(const nlohmann::json& j);

  bool operator==(const Document&) const = default;
};

// Replaces '\r' and '\n' with spaces, then splits sentences and segments
// paragraphs.
Document make_document(std::string doc_id, std::string_view text, std::optional<std::string> source_url = std::nullopt,
                       const TextTilingParams& params = {});

std::vector<CharRange> split_sentences(std::string_view text);

std::vector<SentenceRange> segment_paragraphs(const Document& doc, const TextTilingParams& params = {});

// Raw (unsmoothed) block-comparison similarity for each gap between adjacent
// pseudo-sentence windows. Empty when the text has fewer than 2*k windows.
std::vector<double> texttiling_gap_scores(const Document& doc, const TextTilingParams& params = {});

}  // namespace cyents
