#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cyents {

// Maps between UTF-8 byte offsets and character (Unicode scalar) offsets.
// Every offset that crosses a module boundary is a character offset; the
// matchers work on bytes internally and convert through this table.
class OffsetMap {
 public:
  OffsetMap() = default;
  explicit OffsetMap(std::string_view utf8);

  std::size_t char_count() const { return char_to_byte_.size() - 1; }
  std::size_t byte_count() const { return byte_to_char_.size() - 1; }

  // Bytes inside a multi-byte sequence map to the character that contains
  // them.
  std::size_t to_char(std::size_t byte_offset) const { return byte_to_char_.at(byte_offset); }
  std::size_t to_byte(std::size_t char_offset) const { return char_to_byte_.at(char_offset); }

 private:
  std::vector<std::size_t> byte_to_char_{0};
  std::vector<std::size_t> char_to_byte_{0};
};

std::size_t utf8_length(std::string_view utf8);

// Substring by character offsets [start, end).
std::string utf8_substr(std::string_view utf8, std::size_t start, std::size_t end);

// Length in bytes of the UTF-8 sequence introduced by `lead`; 1 for invalid
// lead bytes so scanning always advances.
inline std::size_t utf8_sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

void append_utf8(std::string& out, char32_t cp);

}  // namespace cyents
