#pragma once

#include <cstdint>
#include <vector>

#include "annotations/annotation_set.hpp"
#include "text/document.hpp"

namespace cyents {

struct SyntheticCorpus {
  std::vector<Document> docs;
  AnnotationSet gold;
};

struct SyntheticSplit {
  SyntheticCorpus train;
  SyntheticCorpus heldout;
};

// Templated threat-report sentences with invented names. Train and held-out
// draw names from disjoint inventories. Sentences are grouped
// `sentences_per_doc` to a document; gold annotator is "synthetic".
SyntheticSplit make_synthetic_corpus(std::size_t train_sentences = 200, std::size_t heldout_sentences = 50,
                                     std::uint64_t seed = 7, std::size_t sentences_per_doc = 5);

}  // namespace cyents
