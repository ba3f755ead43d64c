#pragma once

#include <string>
#include <vector>

namespace cyents {

// Token-index span [first, last] inclusive with a type and a label-list index
// per token it was decoded from.
struct TokenSpan {
  std::size_t first = 0;
  std::size_t last = 0;
  std::string type;
  bool operator==(const TokenSpan&) const = default;
};

enum class TagKind { kOut, kBegin, kInside, kLast, kUnit };

struct Tag {
  TagKind kind = TagKind::kOut;
  std::string type;
};

// "O", "B-X", "I-X", "L-X", "U-X".
Tag parse_tag(const std::string& label);

// Greedy BILOU reading with repair of illegal sequences:
//   nothing open: I-X opens X; L-X is read as U-X.
//   X open: I-X continues, L-X closes. Anything else closes X at the
//   previous token and is then read as if nothing were open.
//   End of sequence closes an open entity.
// Output is sorted and non-overlapping.
std::vector<TokenSpan> decode_bilou(const std::vector<Tag>& tags);

// Index of the largest value; ties go to the lowest index (O is index 0).
std::size_t argmax(const double* values, std::size_t n);

}  // namespace cyents
