#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cyents {

// Byte-level Aho-Corasick automaton. Reports every occurrence of every
// pattern in a single left-to-right pass.
class AhoCorasick {
 public:
  struct Hit {
    std::size_t end = 0;  // byte offset one past the match
    std::size_t pattern = 0;
  };

  AhoCorasick() = default;
  explicit AhoCorasick(const std::vector<std::string>& patterns);

  std::vector<Hit> find_all(std::string_view text) const;

  // True iff `s` is exactly one of the patterns.
  bool accepts(std::string_view s) const;

  std::size_t pattern_length(std::size_t pattern) const { return lengths_[pattern]; }
  std::size_t state_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::map<unsigned char, int> next;
    int fail = 0;
    int dict = -1;      // nearest proper suffix state that ends a pattern
    int pattern = -1;   // pattern ending exactly here
  };

  int step(int state, unsigned char c) const;

  std::vector<Node> nodes_{Node{}};
  std::vector<std::size_t> lengths_;
};

}  // namespace cyents
