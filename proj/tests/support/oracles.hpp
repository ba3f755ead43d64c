#pragma once

// Test-only reference implementations. These deliberately avoid the code
// paths they check.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "common/rng.hpp"
#include "common/strings.hpp"
#include "common/utf8.hpp"
#include "text/tokenizer.hpp"

namespace cyents::testing {

struct SpanLabel {
  std::size_t start, end;
  std::string label;
  bool operator<(const SpanLabel& o) const { return std::tie(start, end, label) < std::tie(o.start, o.end, o.label); }
  bool operator==(const SpanLabel& o) const { return std::tie(start, end, label) == std::tie(o.start, o.end, o.label); }
};

// Brute-force gazetteer: every token-aligned substring, case-folded with
// whitespace collapsed, checked against the entry set; then leftmost-longest.
inline std::vector<SpanLabel> brute_force_gazetteer(const std::string& text, const std::set<std::string>& entries,
                                                    const std::string& label) {
  const auto toks = tokenize(text);
  std::vector<std::size_t> byte_at;  // character offset -> byte offset
  for (std::size_t b = 0; b < text.size(); ++b)
    if ((static_cast<unsigned char>(text[b]) & 0xC0) != 0x80) byte_at.push_back(b);
  byte_at.push_back(text.size());
  std::vector<SpanLabel> cands;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    for (std::size_t j = i; j < toks.size() && j < i + 8; ++j) {
      std::string sub = text.substr(byte_at[toks[i].start], byte_at[toks[j].end] - byte_at[toks[i].start]);
      std::string norm;
      bool space = false;
      for (char c : sub) {
        if (c == ' ' || c == '\t') {
          space = true;
          continue;
        }
        if (space) norm += ' ';
        space = false;
        norm += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
      }
      if (entries.count(norm)) cands.push_back({toks[i].start, toks[j].end, label});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const SpanLabel& a, const SpanLabel& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  std::vector<SpanLabel> out;
  std::size_t covered = 0;
  bool any = false;
  for (const auto& c : cands) {
    if (any && c.start < covered) continue;
    out.push_back(c);
    covered = c.end;
    any = true;
  }
  return out;
}

// Random document from a vocabulary that mixes entries, near misses and
// punctuation.
inline std::string random_gazetteer_text(Rng& rng, std::size_t max_tokens) {
  static const std::vector<std::string> vocab = {
      "Windows", "WINDOWS", "windows", "Server", "server", "Mac", "OS", "os", "X", "C", "++", "+",
      "Node.js", ".NET", "NET", "net", "HTTP", "https", "TCP/IP", "tcp", "IP", "Windowsill", ",", ".",
      "over", "the", "malware", "targets", "Linux", "linux", "Red", "Hat", "Enterprise", "Ubuntu", "(", ")",
      "Ünïcode", "naïve", "SMB", "smbv1", "RDP", "Power", "Shell", "PowerShell"};
  const std::size_t n = rng.below(max_tokens + 1);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const std::size_t r = rng.below(10);
      text += r == 0 ? "" : (r == 1 ? "  " : " ");
    }
    text += vocab[rng.below(vocab.size())];
  }
  return text;
}

inline const std::set<std::string>& oracle_gazetteer_entries() {
  static const std::set<std::string> entries = {
      "windows", "windows server", "mac os", "mac os x", "c++", "node.js", ".net", "http", "https", "tcp/ip",
      "linux", "red hat enterprise linux", "red hat", "ubuntu", "smb", "rdp", "powershell", "power shell", "naïve"};
  return entries;
}

struct RegexCase {
  std::string text;
  std::multiset<std::pair<std::string, std::string>> expected;  // (label, surface)
};

inline std::vector<RegexCase> load_regex_cases(const std::string& path) {
  std::ifstream in(path);
  std::vector<RegexCase> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    RegexCase c;
    c.text = line.substr(0, tab);
    const std::string exp = line.substr(tab + 1);
    if (exp != "-") {
      std::stringstream ss(exp);
      for (std::string item; std::getline(ss, item, ';');) {
        const auto eq = item.find('=');
        c.expected.insert({item.substr(0, eq), item.substr(eq + 1)});
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace cyents::testing
