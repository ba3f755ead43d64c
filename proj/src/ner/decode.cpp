#include "ner/decode.hpp"

#include <optional>

#include "common/error.hpp"

namespace cyents {

Tag parse_tag(const std::string& label) {
  if (label == "O") return {};
  if (label.size() < 3 || label[1] != '-') throw Error(ErrorCode::kInvalidArgument, "bad tag " + label);
  Tag t;
  switch (label[0]) {
    case 'B': t.kind = TagKind::kBegin; break;
    case 'I': t.kind = TagKind::kInside; break;
    case 'L': t.kind = TagKind::kLast; break;
    case 'U': t.kind = TagKind::kUnit; break;
    default: throw Error(ErrorCode::kInvalidArgument, "bad tag " + label);
  }
  t.type = label.substr(2);
  return t;
}

std::vector<TokenSpan> decode_bilou(const std::vector<Tag>& tags) {
  std::vector<TokenSpan> out;
  std::optional<TokenSpan> open;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Tag& t = tags[i];
    if (open) {
      if (t.type == open->type && t.kind == TagKind::kInside) continue;
      if (t.type == open->type && t.kind == TagKind::kLast) {
        open->last = i;
        out.push_back(*open);
        open.reset();
        continue;
      }
      open->last = i - 1;
      out.push_back(*open);
      open.reset();
    }
    switch (t.kind) {
      case TagKind::kOut: break;
      case TagKind::kBegin:
      case TagKind::kInside: open = TokenSpan{i, i, t.type}; break;
      case TagKind::kLast:
      case TagKind::kUnit: out.push_back(TokenSpan{i, i, t.type}); break;
    }
  }
  if (open) {
    open->last = tags.size() - 1;
    out.push_back(*open);
  }
  return out;
}

std::size_t argmax(const double* values, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace cyents
