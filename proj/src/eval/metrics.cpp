#include "eval/metrics.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "common/error.hpp"
#include "spdlog/fmt/fmt.h"

namespace cyents {

ConfusionCounts confusion(const AnnotationSet& gold, const AnnotationSet& pred) {
  ConfusionCounts out;
  if (gold.entries.size() != pred.entries.size()) {
    throw Error(ErrorCode::kDocMismatch, fmt::format("gold covers {} documents, predictions cover {}",
                                                     gold.entries.size(), pred.entries.size()));
  }
  for (const auto& [doc, gold_ms] : gold.entries) {
    const auto it = pred.entries.find(doc);
    if (it == pred.entries.end()) throw Error(ErrorCode::kDocMismatch, "no predictions for document " + doc);
    using Key = std::tuple<std::size_t, std::size_t, std::string>;
    std::multiset<Key> open;
    for (const auto& m : gold_ms) open.emplace(m.start, m.end, m.label);
    for (const auto& m : it->second) {
      const auto hit = open.find(Key{m.start, m.end, m.label});
      if (hit != open.end()) {
        ++out[m.label].tp;
        open.erase(hit);
      } else {
        ++out[m.label].fp;
      }
    }
    for (const auto& [s, e, label] : open) ++out[label].fn;
  }
  return out;
}

std::int64_t percent_hundredths(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return 0;
  return static_cast<std::int64_t>((20000 * num + den) / (2 * den));
}

Prf prf(const Counts& c) {
  Prf out;
  out.p = percent_hundredths(c.tp, c.tp + c.fp);
  out.r = percent_hundredths(c.tp, c.tp + c.fn);
  // 2PR/(P+R) on the exact ratios reduces to 2tp/(2tp+fp+fn).
  out.f = percent_hundredths(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return out;
}

double harmonic_mean(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

MetricsReport report_from_counts(const ConfusionCounts& counts) {
  MetricsReport rep;
  for (const auto& [label, c] : counts) {
    rep.per_type[label] = MetricsRow{c, prf(c)};
    rep.micro.counts += c;
  }
  rep.micro.scores = prf(rep.micro.counts);
  return rep;
}

MetricsReport report(const AnnotationSet& gold, const AnnotationSet& pred) {
  return report_from_counts(confusion(gold, pred));
}

namespace {

std::string hundredths(std::int64_t v) { return fmt::format("{}.{:02d}", v / 100, v % 100); }

nlohmann::json row_json(const MetricsRow& row) {
  return {{"tp", row.counts.tp},
          {"fp", row.counts.fp},
          {"fn", row.counts.fn},
          {"precision", row.scores.precision()},
          {"recall", row.scores.recall()},
          {"f_score", row.scores.f_score()}};
}

}  // namespace

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json types = nlohmann::json::object();
  for (const auto& [label, row] : per_type) types[label] = row_json(row);
  return {{"per_type", types}, {"micro", row_json(micro)}};
}

std::string MetricsReport::to_text() const {
  std::size_t width = 10;
  for (const auto& [label, row] : per_type) width = std::max(width, label.size());
  auto line = [&](const std::string& name, const MetricsRow& row) {
    return fmt::format("{:<{}}  {:>9}  {:>9}  {:>9}  {:>5}  {:>5}  {:>5}\n", name, width, hundredths(row.scores.p),
                       hundredths(row.scores.r), hundredths(row.scores.f), row.counts.tp, row.counts.fp,
                       row.counts.fn);
  };
  std::string out = fmt::format("{:<{}}  {:>9}  {:>9}  {:>9}  {:>5}  {:>5}  {:>5}\n", "type", width, "precision",
                                "recall", "f-score", "tp", "fp", "fn");
  for (const auto& [label, row] : per_type) out += line(label, row);
  out += line("micro", micro);
  return out;
}

}  // namespace cyents
