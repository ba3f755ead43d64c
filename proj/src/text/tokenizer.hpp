#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cyents {

struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const ByteSpan&) const = default;
};

// Character offsets, end-exclusive; surface == text[start, end).
struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;

  bool operator==(const Token&) const = default;
};

// Deterministic rule tokenizer. Whitespace separates tokens; punctuation is
// split off except where it is word-internal ('_', '-', '.', '/', '\\', '@'
// between word characters) or part of a URL or absolute path.
std::vector<ByteSpan> tokenize_bytes(std::string_view text);
std::vector<Token> tokenize(std::string_view text);

// Decodes the code point at byte offset i; `len` receives its byte length.
char32_t decode_at(std::string_view text, std::size_t i, std::size_t* len);

bool is_space_cp(char32_t cp);
bool is_word_cp(char32_t cp);

}  // namespace cyents
