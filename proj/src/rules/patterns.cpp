#include "rules/patterns.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <string>

#include "common/strings.hpp"
#include "common/utf8.hpp"
#include "text/document.hpp"

namespace cyents {

namespace {

struct ByteMatch {
  std::size_t begin;
  std::size_t end;
  const char* label;
};

bool is_word_byte(char c) { return is_ascii_alnum(c) || c == '_'; }

bool starts_with_ci(std::string_view t, std::size_t i, std::string_view prefix) {
  if (i + prefix.size() > t.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k)
    if (ascii_lower(t[i + k]) != prefix[k]) return false;
  return true;
}

std::size_t digit_run(std::string_view t, std::size_t i) {
  std::size_t j = i;
  while (j < t.size() && is_ascii_digit(t[j])) ++j;
  return j - i;
}

bool is_url_trailing(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case ')': case ']': case '}': case '\'': case '"':
      return true;
    default:
      return false;
  }
}

// scheme://host[:port][path]
std::size_t match_url(std::string_view t, std::size_t i) {
  if (i > 0 && is_ascii_alnum(t[i - 1])) return 0;
  std::size_t body = 0;
  for (std::string_view scheme : {"https://", "http://", "ftp://"}) {
    if (starts_with_ci(t, i, scheme)) {
      body = i + scheme.size();
      break;
    }
  }
  if (body == 0) return 0;
  std::size_t j = body;
  while (j < t.size() && (is_ascii_alnum(t[j]) || t[j] == '.' || t[j] == '-' || static_cast<unsigned char>(t[j]) >= 0x80))
    ++j;
  while (j > body && (t[j - 1] == '.' || t[j - 1] == '-')) --j;
  if (j == body || t[body] == '.' || t[body] == '-') return 0;
  if (j < t.size() && t[j] == ':' && digit_run(t, j + 1) > 0) j += 1 + digit_run(t, j + 1);
  if (j < t.size() && (t[j] == '/' || t[j] == '?' || t[j] == '#')) {
    while (j < t.size() && !is_ascii_space(t[j]) && t[j] != '<' && t[j] != '>' && t[j] != '"') ++j;
    while (j > body && is_url_trailing(t[j - 1])) --j;
  }
  return j - i;
}

bool is_local_char(char c) {
  return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}

// Scans around the '@' at position `a`.
bool match_email(std::string_view t, std::size_t a, ByteMatch* m) {
  std::size_t b = a;
  while (b > 0 && is_local_char(t[b - 1])) --b;
  while (b < a && (t[b] == '.' || t[b] == '-')) ++b;
  if (b == a) return false;
  std::size_t e = a + 1;
  while (e < t.size() && (is_ascii_alnum(t[e]) || t[e] == '-' || t[e] == '.')) ++e;
  while (e > a + 1 && (t[e - 1] == '.' || t[e - 1] == '-')) --e;
  std::string_view domain = t.substr(a + 1, e - a - 1);
  const std::size_t dot = domain.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return false;
  std::string_view tld = domain.substr(dot + 1);
  if (tld.size() < 2) return false;
  for (char c : tld)
    if (!is_ascii_alpha(c)) return false;
  if (domain.find("..") != std::string_view::npos || domain[0] == '-') return false;
  *m = {b, e, "Email"};
  return true;
}

// One octet: "0".."255" without leading zeros. Returns length consumed or 0.
std::size_t octet(std::string_view t, std::size_t i) {
  const std::size_t n = digit_run(t, i);
  if (n == 0 || n > 3) return 0;
  if (n > 1 && t[i] == '0') return 0;
  int v = 0;
  for (std::size_t k = 0; k < n; ++k) v = v * 10 + (t[i + k] - '0');
  return v <= 255 ? n : 0;
}

std::size_t match_ipv4(std::string_view t, std::size_t i) {
  if (i > 0 && (is_ascii_alnum(t[i - 1]) || t[i - 1] == '.')) return 0;
  std::size_t j = i;
  for (int part = 0; part < 4; ++part) {
    if (part > 0) {
      if (j >= t.size() || t[j] != '.') return 0;
      ++j;
    }
    const std::size_t n = octet(t, j);
    if (n == 0) return 0;
    j += n;
  }
  if (j < t.size() && is_ascii_alnum(t[j])) return 0;
  if (j + 1 < t.size() && t[j] == '.' && is_ascii_digit(t[j + 1])) return 0;
  return j - i;
}

bool is_ipv6_char(char c) { return is_hex_digit(c) || c == ':' || c == '.'; }

std::size_t match_ipv6(std::string_view t, std::size_t i) {
  if (i > 0 && (is_word_byte(t[i - 1]) || t[i - 1] == ':' || t[i - 1] == '.')) return 0;
  std::size_t j = i;
  int colons = 0;
  while (j < t.size() && is_ipv6_char(t[j])) colons += t[j++] == ':';
  if (colons < 2) return 0;
  if (j < t.size() && is_word_byte(t[j])) return 0;
  while (j > i && t[j - 1] == '.') --j;
  const std::string candidate(t.substr(i, j - i));
  in6_addr addr;
  return inet_pton(AF_INET6, candidate.c_str(), &addr) == 1 ? j - i : 0;
}

std::size_t match_hash(std::string_view t, std::size_t i) {
  if (i > 0 && is_word_byte(t[i - 1])) return 0;
  std::size_t j = i;
  while (j < t.size() && is_word_byte(t[j])) {
    if (!is_hex_digit(t[j])) return 0;
    ++j;
  }
  const std::size_t n = j - i;
  return (n == 32 || n == 40 || n == 64) ? n : 0;
}

std::size_t match_cve(std::string_view t, std::size_t i) {
  if (i > 0 && is_word_byte(t[i - 1])) return 0;
  if (!starts_with_ci(t, i, "cve-")) return 0;
  std::size_t j = i + 4;
  if (digit_run(t, j) != 4) return 0;
  j += 4;
  if (j >= t.size() || t[j] != '-') return 0;
  ++j;
  const std::size_t n = digit_run(t, j);
  if (n < 4 || n > 7) return 0;
  j += n;
  if (j < t.size() && is_word_byte(t[j])) return 0;
  return j - i;
}

// Digits at i forming a port number 0..65535 and not followed by a word
// character. Returns the digit count or 0.
std::size_t port_digits(std::string_view t, std::size_t i) {
  const std::size_t n = digit_run(t, i);
  if (n == 0 || n > 5) return 0;
  if (i + n < t.size() && is_word_byte(t[i + n])) return 0;
  if (i + n + 1 < t.size() && t[i + n] == '.' && is_ascii_digit(t[i + n + 1])) return 0;
  long v = std::stol(std::string(t.substr(i, n)));
  return v <= 65535 ? n : 0;
}

std::size_t match_port_trigger(std::string_view t, std::size_t i) {
  if (i > 0 && is_word_byte(t[i - 1])) return 0;
  for (std::string_view trig : {"ports ", "port "}) {
    if (starts_with_ci(t, i, trig)) return trig.size();
  }
  return 0;
}

std::vector<ByteMatch> scan(std::string_view t) {
  std::vector<ByteMatch> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const char c = t[i];
    if (std::size_t n = match_url(t, i)) out.push_back({i, i + n, "URL"});
    if (c == '@') {
      ByteMatch m;
      if (match_email(t, i, &m)) out.push_back(m);
    }
    if (is_ascii_digit(c)) {
      if (std::size_t n = match_ipv4(t, i)) {
        out.push_back({i, i + n, "IP_Address"});
        const std::size_t after = i + n;
        if (after < t.size() && t[after] == ':') {
          if (std::size_t p = port_digits(t, after + 1)) out.push_back({after + 1, after + 1 + p, "Port"});
        }
      }
    }
    if (is_hex_digit(c) || c == ':') {
      if (std::size_t n = match_ipv6(t, i)) out.push_back({i, i + n, "IP_Address"});
    }
    if (is_hex_digit(c)) {
      if (std::size_t n = match_hash(t, i)) out.push_back({i, i + n, "Hash"});
    }
    if (c == 'c' || c == 'C') {
      if (std::size_t n = match_cve(t, i)) out.push_back({i, i + n, "CVE"});
    }
    if (c == 'p' || c == 'P') {
      if (std::size_t trig = match_port_trigger(t, i)) {
        if (std::size_t p = port_digits(t, i + trig)) out.push_back({i + trig, i + trig + p, "Port"});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Mention> match_patterns(std::string_view text) {
  OffsetMap map(text);
  std::vector<Mention> candidates;
  for (const auto& m : scan(text))
    candidates.push_back(Mention{map.to_char(m.begin), map.to_char(m.end), m.label, Provenance::kRule, 1.0});
  return resolve_leftmost_longest(std::move(candidates));
}

std::vector<Mention> match_patterns(const Document& doc) { return match_patterns(std::string_view(doc.text)); }

std::vector<Mention> prepopulate_mentions(std::string_view text, const std::vector<Gazetteer>& gazetteers) {
  std::vector<Mention> chosen = match_patterns(text);
  std::vector<Mention> gazetteer_hits;
  for (const auto& g : gazetteers) {
    for (auto& m : g.match(text)) {
      bool blocked = false;
      for (const auto& r : chosen) blocked = blocked || r.overlaps(m);
      if (!blocked) gazetteer_hits.push_back(std::move(m));
    }
  }
  for (auto& m : resolve_leftmost_longest(std::move(gazetteer_hits))) chosen.push_back(std::move(m));
  std::sort(chosen.begin(), chosen.end(), mention_less);
  return chosen;
}

AnnotationSet prepopulate(const Document& doc, const std::vector<Gazetteer>& gazetteers) {
  AnnotationSet set;
  set.annotator_id = "rules";
  set.entries[doc.doc_id] = prepopulate_mentions(doc.text, gazetteers);
  return set;
}

}  // namespace cyents
