#pragma once

#include <map>
#include <string>
#include <vector>

#include "annotations/annotation_set.hpp"
#include "json.hpp"

namespace cyents {

struct TypeAgreement {
  std::size_t a_count = 0;
  std::size_t b_count = 0;
  std::size_t agreed = 0;
  bool operator==(const TypeAgreement&) const = default;
};

struct IAAReport {
  std::string annotator_a, annotator_b;
  std::size_t count_a = 0, count_b = 0;
  std::size_t total_max = 0;  // max(count_a, count_b)
  std::size_t accepted = 0;   // exact (doc, start, end, label) matches
  double acceptance_rate = 0.0;
  double pairwise_f1 = 0.0;
  std::map<std::string, TypeAgreement> per_type;

  nlohmann::json to_json() const;
};

// Throws DocMismatch unless both sets cover the same doc ids.
IAAReport agreement(const AnnotationSet& a, const AnnotationSet& b);

// Several annotator groups summed: total_max and accepted add up per group.
struct StudyReport {
  std::vector<IAAReport> groups;
  std::size_t total_max = 0;
  std::size_t accepted = 0;
  double acceptance_rate = 0.0;

  nlohmann::json to_json() const;
};
StudyReport aggregate_study(std::vector<IAAReport> groups);

// Exact intersection across all sets; annotator "accepted", provenance human.
// Needs at least two sets over the same doc ids.
AnnotationSet merge_group(const std::vector<AnnotationSet>& sets);

std::map<std::string, std::size_t> label_distribution(const AnnotationSet& set);

// Keeps only the listed documents (missing ones are ignored).
AnnotationSet restrict_docs(const AnnotationSet& set, const std::vector<std::string>& doc_ids);

}  // namespace cyents
