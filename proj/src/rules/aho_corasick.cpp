#include "rules/aho_corasick.hpp"

#include <queue>

namespace cyents {

AhoCorasick::AhoCorasick(const std::vector<std::string>& patterns) {
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    int state = 0;
    for (char ch : patterns[p]) {
      const auto c = static_cast<unsigned char>(ch);
      auto it = nodes_[state].next.find(c);
      if (it == nodes_[state].next.end()) {
        nodes_[state].next[c] = static_cast<int>(nodes_.size());
        state = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
      } else {
        state = it->second;
      }
    }
    if (nodes_[state].pattern < 0) nodes_[state].pattern = static_cast<int>(p);
    lengths_.push_back(patterns[p].size());
  }

  std::queue<int> bfs;
  for (const auto& [c, child] : nodes_[0].next) bfs.push(child);
  while (!bfs.empty()) {
    const int u = bfs.front();
    bfs.pop();
    for (const auto& [c, v] : nodes_[u].next) {
      int f = nodes_[u].fail;
      while (f > 0 && !nodes_[f].next.count(c)) f = nodes_[f].fail;
      auto it = nodes_[f].next.find(c);
      nodes_[v].fail = (it != nodes_[f].next.end() && it->second != v) ? it->second : 0;
      const int fv = nodes_[v].fail;
      nodes_[v].dict = nodes_[fv].pattern >= 0 ? fv : nodes_[fv].dict;
      bfs.push(v);
    }
  }
}

int AhoCorasick::step(int state, unsigned char c) const {
  while (true) {
    auto it = nodes_[state].next.find(c);
    if (it != nodes_[state].next.end()) return it->second;
    if (state == 0) return 0;
    state = nodes_[state].fail;
  }
}

std::vector<AhoCorasick::Hit> AhoCorasick::find_all(std::string_view text) const {
  std::vector<Hit> hits;
  int state = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    state = step(state, static_cast<unsigned char>(text[i]));
    for (int s = nodes_[state].pattern >= 0 ? state : nodes_[state].dict; s >= 0; s = nodes_[s].dict)
      hits.push_back({i + 1, static_cast<std::size_t>(nodes_[s].pattern)});
  }
  return hits;
}

bool AhoCorasick::accepts(std::string_view s) const {
  int state = 0;
  for (char ch : s) {
    auto it = nodes_[state].next.find(static_cast<unsigned char>(ch));
    if (it == nodes_[state].next.end()) return false;
    state = it->second;
  }
  return nodes_[state].pattern >= 0;
}

}  // namespace cyents
