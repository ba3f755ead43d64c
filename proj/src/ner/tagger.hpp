#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "annotations/annotation_set.hpp"
#include "json.hpp"
#include "ner/model.hpp"
#include "text/document.hpp"
#include "text/tokenizer.hpp"

namespace cyents {

struct TrainConfig {
  std::size_t epochs = 20;
  double learning_rate = 0.01;
  std::size_t batch_size = 8;
  std::uint64_t rng_seed = 42;
  double dropout = 0.2;
  std::size_t rows = 5000;
  std::size_t width = 64;

  // Throws kInvalidArgument.
  void validate() const;
  nlohmann::json to_json() const;
  // Missing keys keep their defaults.
  static TrainConfig from_json(const nlohmann::json& j);
};

// One training unit: the tokens of a sentence and a label index per token.
struct TaggedSentence {
  std::vector<std::string> surfaces;
  std::vector<std::size_t> gold;
};

// Tokens of `doc`, grouped by the sentence their first character falls in.
std::vector<std::vector<Token>> sentence_tokens(const Document& doc);

// BILOU targets for every sentence of every annotated document. Spans are
// widened to token boundaries; non-statistical labels are skipped. Throws
// LabelOutsideSchema, DocMismatch (document missing) or EmptyDataset.
std::vector<TaggedSentence> build_training_sentences(const std::vector<Document>& docs, const AnnotationSet& gold,
                                                     const TaggerModel& model, const Schema& schema);

// Seeded minibatch SGD on token cross-entropy summed over each batch. The returned model's
// training_meta holds the config and the per-epoch training loss.
TaggerModel train(const std::vector<Document>& docs, const AnnotationSet& gold, const TrainConfig& config,
                  const Schema& schema);
TaggerModel train_sentences(const std::vector<TaggedSentence>& data, TaggerModel model, const TrainConfig& config);

// n x d context vectors for n token embeddings (row-major).
std::vector<double> encode(const TaggerModel& model, const std::vector<double>& embeddings);

// n x labels probabilities (row-major).
std::vector<double> token_probabilities(const TaggerModel& model, const std::vector<std::string>& surfaces);

std::vector<Mention> predict(const Document& doc, const TaggerModel& model);
AnnotationSet extract(const std::vector<Document>& docs, const TaggerModel& model);

// Mean token cross-entropy without dropout, and its gradient.
double sentence_loss(const TaggerModel& model, const TaggedSentence& sentence);
Params loss_gradient(const TaggerModel& model, const TaggedSentence& sentence, bool corrupt_backward = false);

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::array<double, kWeightGroupCount> per_group{};
  std::size_t checked = 0;
};

// Central differences over every weight, relative error
// |a - n| / max(|a|, |n|, 1e-6). `corrupt_backward` drops one tanh
// derivative so tests can confirm the check detects a broken gradient.
GradientCheckReport gradient_check(const TaggerModel& model, const TaggedSentence& sentence, double epsilon,
                                   bool corrupt_backward = false);

}  // namespace cyents
