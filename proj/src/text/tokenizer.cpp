#include "text/tokenizer.hpp"

#include "common/strings.hpp"
#include "common/utf8.hpp"

namespace cyents {

namespace {

bool starts_with_ci(std::string_view text, std::size_t i, std::string_view prefix) {
  if (i + prefix.size() > text.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k)
    if (ascii_lower(text[i + k]) != prefix[k]) return false;
  return true;
}

bool is_trailing_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case ')': case ']': case '}': case '\'': case '"':
      return true;
    default:
      return false;
  }
}

bool word_at(std::string_view text, std::size_t i) {
  if (i >= text.size()) return false;
  std::size_t len;
  return is_word_cp(decode_at(text, i, &len));
}

bool word_before(std::string_view text, std::size_t i) {
  if (i == 0) return false;
  std::size_t j = i - 1;
  while (j > 0 && (static_cast<unsigned char>(text[j]) & 0xC0) == 0x80) --j;
  return word_at(text, j);
}

// Consumes a run of non-space characters starting at i, then trims trailing
// sentence punctuation. Returns the end byte offset.
std::size_t scan_nonspace(std::string_view text, std::size_t i, std::size_t min_end) {
  std::size_t j = i;
  while (j < text.size()) {
    std::size_t len;
    char32_t cp = decode_at(text, j, &len);
    if (is_space_cp(cp) || cp == '<' || cp == '>' || cp == '"') break;
    j += len;
  }
  while (j > min_end && is_trailing_punct(text[j - 1])) --j;
  return j;
}

std::size_t match_url(std::string_view text, std::size_t i) {
  if (word_before(text, i)) return 0;
  for (std::string_view scheme : {"https://", "http://", "ftp://"}) {
    if (starts_with_ci(text, i, scheme)) {
      const std::size_t body = i + scheme.size();
      if (!word_at(text, body)) return 0;
      std::size_t end = scan_nonspace(text, i, body);
      return end > body ? end - i : 0;
    }
  }
  return 0;
}

bool path_char(char c) {
  return is_ascii_alnum(c) || c == '.' || c == '_' || c == '-' || c == '/' || c == '\\' || c == '~' || c == '$' ||
         c == '%' || static_cast<unsigned char>(c) >= 0x80;
}

std::size_t match_path(std::string_view text, std::size_t i) {
  if (word_before(text, i)) return 0;
  std::size_t body = 0;
  if (i + 3 <= text.size() && is_ascii_alpha(text[i]) && text[i + 1] == ':' && text[i + 2] == '\\') {
    body = i + 3;
  } else if (text[i] == '/' && word_at(text, i + 1)) {
    body = i + 1;
  } else if (text[i] == '~' && i + 1 < text.size() && text[i + 1] == '/' && word_at(text, i + 2)) {
    body = i + 2;
  } else if (text[i] == '%' && i + 1 < text.size() && is_ascii_alpha(text[i + 1])) {
    // %APPDATA%\foo
    std::size_t close = text.find('%', i + 1);
    if (close == std::string_view::npos || close + 1 >= text.size() || text[close + 1] != '\\') return 0;
    body = close + 2;
  } else {
    return 0;
  }
  std::size_t j = body;
  while (j < text.size() && path_char(text[j])) ++j;
  while (j > body && (text[j - 1] == '.' || text[j - 1] == '-')) --j;
  return j > body ? j - i : 0;
}

bool word_internal(char c) { return c == '_' || c == '-' || c == '.' || c == '/' || c == '\\' || c == '@'; }

}  // namespace

char32_t decode_at(std::string_view text, std::size_t i, std::size_t* len) {
  const auto lead = static_cast<unsigned char>(text[i]);
  std::size_t n = utf8_sequence_length(lead);
  if (i + n > text.size()) n = 1;
  *len = n;
  if (n == 1) return lead;
  char32_t cp = lead & (0xFF >> (n + 1));
  for (std::size_t k = 1; k < n; ++k) cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
  return cp;
}

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' || cp == 0xA0 ||
         (cp >= 0x2000 && cp <= 0x200B) || cp == 0x202F || cp == 0x205F || cp == 0x3000 || cp == 0xFEFF;
}

bool is_word_cp(char32_t cp) {
  if (cp < 0x80) return is_ascii_alnum(static_cast<char>(cp));
  if (is_space_cp(cp)) return false;
  // Latin-1 symbols, general punctuation, CJK punctuation.
  if (cp >= 0x80 && cp <= 0xBF) return false;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2010 && cp <= 0x206F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  return true;
}

std::vector<ByteSpan> tokenize_bytes(std::string_view text) {
  std::vector<ByteSpan> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len;
    char32_t cp = decode_at(text, i, &len);
    if (is_space_cp(cp)) {
      i += len;
      continue;
    }
    if (std::size_t n = match_url(text, i)) {
      out.push_back({i, i + n});
      i += n;
      continue;
    }
    if (std::size_t n = match_path(text, i)) {
      out.push_back({i, i + n});
      i += n;
      continue;
    }
    if (is_word_cp(cp)) {
      std::size_t j = i + len;
      while (j < text.size()) {
        std::size_t l;
        if (is_word_cp(decode_at(text, j, &l))) {
          j += l;
        } else if (word_internal(text[j]) && word_at(text, j + 1)) {
          j += 1;
        } else {
          break;
        }
      }
      out.push_back({i, j});
      i = j;
      continue;
    }
    out.push_back({i, i + len});
    i += len;
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  const auto spans = tokenize_bytes(text);
  OffsetMap map(text);
  std::vector<Token> out;
  out.reserve(spans.size());
  for (const auto& s : spans)
    out.push_back(Token{map.to_char(s.begin), map.to_char(s.end), std::string(text.substr(s.begin, s.size()))});
  return out;
}

}  // namespace cyents
