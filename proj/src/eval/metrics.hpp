#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "annotations/annotation_set.hpp"
#include "json.hpp"

namespace cyents {

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

// Per-label counts. Exact (doc, start, end, label) matching; each gold span
// pairs with at most one prediction. Throws DocMismatch unless both sets
// cover the same documents.
using ConfusionCounts = std::map<std::string, Counts>;
ConfusionCounts confusion(const AnnotationSet& gold, const AnnotationSet& pred);

// Percentages in hundredths, rounded half-up from the exact ratio.
// 0/0 is 0.
struct Prf {
  std::int64_t p = 0, r = 0, f = 0;
  double precision() const { return p / 100.0; }
  double recall() const { return r / 100.0; }
  double f_score() const { return f / 100.0; }
  bool operator==(const Prf&) const = default;
};
Prf prf(const Counts& c);

// Half-up rounding of 100*num/den to hundredths, in integer arithmetic.
std::int64_t percent_hundredths(std::uint64_t num, std::uint64_t den);

// 2PR/(P+R), 0 when both are 0.
double harmonic_mean(double p, double r);

struct MetricsRow {
  Counts counts;
  Prf scores;
};

struct MetricsReport {
  std::map<std::string, MetricsRow> per_type;
  MetricsRow micro;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

MetricsReport report(const AnnotationSet& gold, const AnnotationSet& pred);
MetricsReport report_from_counts(const ConfusionCounts& counts);

}  // namespace cyents
