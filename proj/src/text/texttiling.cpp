#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "common/strings.hpp"
#include "common/utf8.hpp"
#include "text/document.hpp"

namespace cyents {

namespace {

using Bag = std::map<std::string, double>;

// Depths at or below this are float noise from comparing identical blocks.
constexpr double kDepthEpsilon = 1e-9;

struct Words {
  std::vector<std::string> terms;
  std::vector<std::size_t> char_start;
};

Words word_tokens(std::string_view text) {
  Words w;
  OffsetMap map(text);
  for (const auto& span : tokenize_bytes(text)) {
    std::string_view s = text.substr(span.begin, span.size());
    bool has_word = false;
    for (std::size_t i = 0; i < s.size() && !has_word;) {
      std::size_t len;
      has_word = is_word_cp(decode_at(s, i, &len));
      i += len;
    }
    if (!has_word) continue;
    w.terms.push_back(fold_case(s));
    w.char_start.push_back(map.to_char(span.begin));
  }
  return w;
}

double cosine(const Bag& a, const Bag& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [k, v] : a) {
    na += v * v;
    if (auto it = b.find(k); it != b.end()) dot += v * it->second;
  }
  for (const auto& [k, v] : b) nb += v * v;
  if (na == 0 || nb == 0) return 0;
  return dot / std::sqrt(na * nb);
}

}  // namespace

std::vector<double> texttiling_gap_scores(const Document& doc, const TextTilingParams& params) {
  const Words words = word_tokens(doc.text);
  const std::size_t w = std::max<std::size_t>(params.window_w, 1);
  const std::size_t k = std::max<std::size_t>(params.block_k, 1);
  const std::size_t n_windows = (words.terms.size() + w - 1) / w;
  if (n_windows < 2 * k) return {};

  std::vector<Bag> windows(n_windows);
  for (std::size_t i = 0; i < words.terms.size(); ++i) windows[i / w][words.terms[i]] += 1;

  std::vector<double> scores;
  for (std::size_t g = 0; g + 1 < n_windows; ++g) {
    Bag left, right;
    for (std::size_t i = (g + 1 >= k ? g + 1 - k : 0); i <= g; ++i)
      for (const auto& [t, c] : windows[i]) left[t] += c;
    for (std::size_t i = g + 1; i < std::min(n_windows, g + 1 + k); ++i)
      for (const auto& [t, c] : windows[i]) right[t] += c;
    scores.push_back(cosine(left, right));
  }
  return scores;
}

std::vector<SentenceRange> segment_paragraphs(const Document& doc, const TextTilingParams& params) {
  const std::size_t n_sent = doc.sentences.size();
  if (n_sent == 0) return {};
  const std::vector<double> raw = texttiling_gap_scores(doc, params);
  if (raw.size() < 3) return {{0, n_sent}};

  const std::size_t n = raw.size();
  std::vector<double> sm(n);
  for (std::size_t g = 0; g < n; ++g) {
    double sum = raw[g];
    int count = 1;
    if (g > 0) sum += raw[g - 1], ++count;
    if (g + 1 < n) sum += raw[g + 1], ++count;
    sm[g] = sum / count;
  }

  // Interior local minima with their depth.
  std::vector<std::pair<std::size_t, double>> valleys;
  for (std::size_t g = 1; g + 1 < n; ++g) {
    if (!(sm[g] < sm[g - 1] && sm[g] <= sm[g + 1])) continue;
    double lpeak = sm[g];
    for (std::size_t j = g; j-- > 0;) {
      if (sm[j] >= lpeak) lpeak = sm[j];
      else break;
    }
    double rpeak = sm[g];
    for (std::size_t j = g + 1; j < n; ++j) {
      if (sm[j] >= rpeak) rpeak = sm[j];
      else break;
    }
    const double depth = (lpeak - sm[g]) + (rpeak - sm[g]);
    if (depth > kDepthEpsilon) valleys.emplace_back(g, depth);
  }
  if (valleys.empty()) return {{0, n_sent}};

  double mean = 0;
  for (const auto& v : valleys) mean += v.second;
  mean /= static_cast<double>(valleys.size());
  double var = 0;
  for (const auto& v : valleys) var += (v.second - mean) * (v.second - mean);
  const double stddev = std::sqrt(var / static_cast<double>(valleys.size()));
  const double cutoff = mean - params.depth_cutoff_multiplier * stddev;

  // Gap g sits before the first word of window g+1; snap it to the nearest
  // sentence start (boundary index b splits sentences b-1 | b).
  const Words words = word_tokens(doc.text);
  const std::size_t w = std::max<std::size_t>(params.window_w, 1);
  std::set<std::size_t> boundaries;
  for (const auto& [g, depth] : valleys) {
    if (depth < cutoff) continue;
    const std::size_t pos = words.char_start[(g + 1) * w];
    std::size_t best = 0;
    std::size_t best_dist = SIZE_MAX;
    for (std::size_t b = 1; b < n_sent; ++b) {
      const std::size_t start = doc.sentences[b].start;
      const std::size_t dist = start > pos ? start - pos : pos - start;
      if (dist < best_dist) best = b, best_dist = dist;
    }
    if (best > 0) boundaries.insert(best);
  }

  std::vector<SentenceRange> out;
  std::size_t first = 0;
  for (std::size_t b : boundaries) {
    out.push_back({first, b});
    first = b;
  }
  out.push_back({first, n_sent});
  return out;
}

}  // namespace cyents
