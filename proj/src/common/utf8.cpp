#include "common/utf8.hpp"

namespace cyents {

OffsetMap::OffsetMap(std::string_view utf8) {
  byte_to_char_.assign(utf8.size() + 1, 0);
  char_to_byte_.clear();
  std::size_t chars = 0;
  std::size_t i = 0;
  while (i < utf8.size()) {
    std::size_t len = utf8_sequence_length(static_cast<unsigned char>(utf8[i]));
    if (i + len > utf8.size()) len = utf8.size() - i;
    char_to_byte_.push_back(i);
    for (std::size_t k = 0; k < len; ++k) byte_to_char_[i + k] = chars;
    i += len;
    ++chars;
  }
  byte_to_char_[utf8.size()] = chars;
  char_to_byte_.push_back(utf8.size());
}

std::size_t utf8_length(std::string_view utf8) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < utf8.size(); ++n)
    i += utf8_sequence_length(static_cast<unsigned char>(utf8[i]));
  return n;
}

std::string utf8_substr(std::string_view utf8, std::size_t start, std::size_t end) {
  OffsetMap map(utf8);
  if (end > map.char_count()) end = map.char_count();
  if (start >= end) return {};
  std::size_t b = map.to_byte(start);
  return std::string(utf8.substr(b, map.to_byte(end) - b));
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x110000) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace cyents
