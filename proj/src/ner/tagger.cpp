#include "ner/tagger.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "ner/decode.hpp"
#include "spdlog/spdlog.h"

namespace cyents {
namespace {

struct Pass {
  std::size_t n = 0;
  std::vector<std::array<std::size_t, kHashSeeds>> rows;
  std::array<std::vector<double>, kConvLayers + 1> h;
  std::array<std::vector<double>, kConvLayers> a;
  std::vector<double> mask;
  std::vector<double> top;
  std::vector<double> probs;
};

// z[i] = b + sum_k W_k h[i + k - 1], zero padded.
void conv_forward(const std::vector<double>& W, const std::vector<double>& b, const std::vector<double>& in,
                  std::vector<double>& z, std::size_t n, std::size_t d) {
  z.assign(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* zi = &z[i * d];
    for (std::size_t o = 0; o < d; ++o) zi[o] = b[o];
    for (std::size_t k = 0; k < kConvWindow; ++k) {
      if (i + k < 1 || i + k - 1 >= n) continue;
      const double* hp = &in[(i + k - 1) * d];
      const double* Wk = &W[k * d * d];
      for (std::size_t o = 0; o < d; ++o) {
        const double* row = Wk + o * d;
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += row[j] * hp[j];
        zi[o] += acc;
      }
    }
  }
}

void encode_pass(const TaggerModel& m, Pass& p) {
  const std::size_t d = m.width;
  std::vector<double> z;
  for (std::size_t l = 0; l < kConvLayers; ++l) {
    const int wg = l == 0 ? kConv0W : kConv1W;
    conv_forward(m.params.w[wg], m.params.w[wg + 1], p.h[l], z, p.n, d);
    p.a[l].resize(p.n * d);
    p.h[l + 1].resize(p.n * d);
    for (std::size_t i = 0; i < p.n * d; ++i) {
      p.a[l][i] = std::tanh(z[i]);
      p.h[l + 1][i] = p.h[l][i] + p.a[l][i];
    }
  }
}

void forward(const TaggerModel& m, const std::vector<std::string>& surfaces, Pass& p, Rng* dropout_rng,
             double dropout) {
  const std::size_t d = m.width, L = m.label_count();
  p.n = surfaces.size();
  p.rows.resize(p.n);
  p.h[0].assign(p.n * d, 0.0);
  const auto& E = m.params.w[kEmbed];
  for (std::size_t i = 0; i < p.n; ++i) {
    p.rows[i] = m.embed_rows(surfaces[i]);
    for (std::size_t r : p.rows[i]) {
      for (std::size_t j = 0; j < d; ++j) p.h[0][i * d + j] += E[r * d + j];
    }
  }
  encode_pass(m, p);

  p.top = p.h[kConvLayers];
  p.mask.clear();
  if (dropout_rng && dropout > 0.0) {
    p.mask.resize(p.n * d);
    const double keep = 1.0 - dropout;
    for (std::size_t i = 0; i < p.n * d; ++i) {
      p.mask[i] = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
      p.top[i] *= p.mask[i];
    }
  }

  const auto& Wo = m.params.w[kOutW];
  const auto& bo = m.params.w[kOutB];
  p.probs.assign(p.n * L, 0.0);
  for (std::size_t i = 0; i < p.n; ++i) {
    double* out = &p.probs[i * L];
    for (std::size_t l = 0; l < L; ++l) out[l] = bo[l];
    for (std::size_t j = 0; j < d; ++j) {
      const double x = p.top[i * d + j];
      const double* row = &Wo[j * L];
      for (std::size_t l = 0; l < L; ++l) out[l] += x * row[l];
    }
    const double mx = *std::max_element(out, out + L);
    double sum = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      out[l] = std::exp(out[l] - mx);
      sum += out[l];
    }
    for (std::size_t l = 0; l < L; ++l) out[l] /= sum;
  }
}

// Accumulates d(loss)/d(params) into `g` given d(loss)/d(logits). Embedding
// rows that receive gradient are appended to `touched`.
void backward(const TaggerModel& m, const Pass& p, const std::vector<double>& dlogits, Params& g,
              std::vector<std::size_t>* touched, bool corrupt) {
  const std::size_t d = m.width, L = m.label_count(), n = p.n;
  const auto& Wo = m.params.w[kOutW];
  std::vector<double> dh(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* dl = &dlogits[i * L];
    for (std::size_t l = 0; l < L; ++l) g.w[kOutB][l] += dl[l];
    for (std::size_t j = 0; j < d; ++j) {
      const double x = p.top[i * d + j];
      double* grow = &g.w[kOutW][j * L];
      const double* wrow = &Wo[j * L];
      double acc = 0.0;
      for (std::size_t l = 0; l < L; ++l) {
        grow[l] += x * dl[l];
        acc += wrow[l] * dl[l];
      }
      dh[i * d + j] = p.mask.empty() ? acc : acc * p.mask[i * d + j];
    }
  }

  std::vector<double> dz(n * d);
  for (std::size_t layer = kConvLayers; layer-- > 0;) {
    const int wg = layer == 0 ? kConv0W : kConv1W;
    const auto& W = m.params.w[wg];
    auto& gW = g.w[wg];
    auto& gb = g.w[wg + 1];
    const auto& a = p.a[layer];
    const auto& hin = p.h[layer];
    const bool skip_derivative = corrupt && layer == kConvLayers - 1;
    for (std::size_t i = 0; i < n * d; ++i) dz[i] = skip_derivative ? dh[i] : dh[i] * (1.0 - a[i] * a[i]);
    // dh already holds the residual path; add the convolution path.
    for (std::size_t i = 0; i < n; ++i) {
      const double* dzi = &dz[i * d];
      for (std::size_t o = 0; o < d; ++o) gb[o] += dzi[o];
      for (std::size_t k = 0; k < kConvWindow; ++k) {
        if (i + k < 1 || i + k - 1 >= n) continue;
        const std::size_t pidx = i + k - 1;
        const double* hp = &hin[pidx * d];
        double* dhp = &dh[pidx * d];
        for (std::size_t o = 0; o < d; ++o) {
          const double dzo = dzi[o];
          if (dzo == 0.0) continue;
          const double* wrow = &W[(k * d + o) * d];
          double* grow = &gW[(k * d + o) * d];
          for (std::size_t j = 0; j < d; ++j) {
            grow[j] += dzo * hp[j];
            dhp[j] += dzo * wrow[j];
          }
        }
      }
    }
  }

  auto& gE = g.w[kEmbed];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r : p.rows[i]) {
      for (std::size_t j = 0; j < d; ++j) gE[r * d + j] += dh[i * d + j];
      if (touched) touched->push_back(r);
    }
  }
}

Params zero_like(const Params& p) {
  Params g;
  for (int k = 0; k < kWeightGroupCount; ++k) g.w[k].assign(p.w[k].size(), 0.0);
  return g;
}

double pass_loss(const Pass& p, const std::vector<std::size_t>& gold, std::size_t L) {
  double loss = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) loss -= std::log(std::max(p.probs[i * L + gold[i]], 1e-300));
  return loss;
}

double dataset_loss(const TaggerModel& m, const std::vector<TaggedSentence>& data) {
  Pass p;
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& s : data) {
    if (s.surfaces.empty()) continue;
    forward(m, s.surfaces, p, nullptr, 0.0);
    total += pass_loss(p, s.gold, m.label_count());
    tokens += s.surfaces.size();
  }
  return tokens == 0 ? 0.0 : total / tokens;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "learning_rate must be positive");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidArgument, "batch_size must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error(ErrorCode::kInvalidArgument, "dropout must be in [0, 1)");
  if (rows < 1 || width < 1) throw Error(ErrorCode::kInvalidArgument, "rows and width must be positive");
}

nlohmann::json TrainConfig::to_json() const {
  return {{"epochs", epochs}, {"learning_rate", learning_rate}, {"batch_size", batch_size},
          {"rng_seed", rng_seed}, {"dropout", dropout}, {"rows", rows}, {"width", width}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  try {
    c.epochs = j.value("epochs", c.epochs);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.dropout = j.value("dropout", c.dropout);
    c.rows = j.value("rows", c.rows);
    c.width = j.value("width", c.width);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("train config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<std::vector<Token>> sentence_tokens(const Document& doc) {
  std::vector<std::vector<Token>> groups;
  const auto tokens = tokenize(doc.text);
  std::size_t s = 0;
  long current = -2;
  for (const auto& t : tokens) {
    while (s < doc.sentences.size() && doc.sentences[s].end <= t.start) ++s;
    const long key = s < doc.sentences.size() && doc.sentences[s].start <= t.start ? static_cast<long>(s) : -1;
    if (groups.empty() || key != current) groups.emplace_back();
    current = key;
    groups.back().push_back(t);
  }
  return groups;
}

std::vector<TaggedSentence> build_training_sentences(const std::vector<Document>& docs, const AnnotationSet& gold,
                                                     const TaggerModel& model, const Schema& schema) {
  std::map<std::string, const Document*> by_id;
  for (const auto& d : docs) by_id[d.doc_id] = &d;
  std::map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < model.labels.size(); ++i) label_index[model.labels[i]] = i;

  std::vector<TaggedSentence> out;
  std::size_t skipped_category = 0, snapped = 0, dropped = 0;
  for (const auto& [doc_id, mentions] : gold.entries) {
    const auto it = by_id.find(doc_id);
    if (it == by_id.end()) throw Error(ErrorCode::kDocMismatch, "document " + doc_id + " is not in the store");
    const auto groups = sentence_tokens(*it->second);

    std::vector<const Token*> flat;
    std::vector<std::size_t> group_of;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (const auto& t : groups[g]) {
        flat.push_back(&t);
        group_of.push_back(g);
      }
    }
    std::vector<std::size_t> tags(flat.size(), 0);
    std::vector<bool> taken(flat.size(), false);

    for (const auto& m : mentions) {
      const EntityType* type = schema.find(m.label);
      if (!type) {
        throw Error(ErrorCode::kLabelOutsideSchema,
                    "label " + m.label + " is not in schema " + std::string(to_string(schema.id())));
      }
      if (type->category != Category::kStatistical) {
        ++skipped_category;
        continue;
      }
      std::size_t first = 0;
      while (first < flat.size() && flat[first]->end <= m.start) ++first;
      std::size_t last = first;
      while (last + 1 < flat.size() && flat[last + 1]->start < m.end) ++last;
      if (first >= flat.size() || flat[first]->start >= m.end) {
        spdlog::warn("{}: span [{},{}) {} covers no token, skipped", doc_id, m.start, m.end, m.label);
        ++dropped;
        continue;
      }
      if (group_of[first] != group_of[last] ||
          std::any_of(taken.begin() + first, taken.begin() + last + 1, [](bool b) { return b; })) {
        spdlog::warn("{}: span [{},{}) {} crosses a sentence or overlaps after widening, skipped", doc_id, m.start,
                     m.end, m.label);
        ++dropped;
        continue;
      }
      if (flat[first]->start != m.start || flat[last]->end != m.end) {
        spdlog::debug("{}: span [{},{}) widened to [{},{})", doc_id, m.start, m.end, flat[first]->start,
                      flat[last]->end);
        ++snapped;
      }
      for (std::size_t k = first; k <= last; ++k) {
        const char* prefix = first == last ? "U-" : k == first ? "B-" : k == last ? "L-" : "I-";
        tags[k] = label_index.at(prefix + m.label);
        taken[k] = true;
      }
    }

    std::size_t k = 0;
    for (const auto& g : groups) {
      TaggedSentence s;
      for (const auto& t : g) {
        s.surfaces.push_back(t.surface);
        s.gold.push_back(tags[k++]);
      }
      out.push_back(std::move(s));
    }
  }
  if (skipped_category) spdlog::info("skipped {} mentions with non-statistical labels", skipped_category);
  if (snapped) spdlog::info("widened {} mentions to token boundaries", snapped);
  if (dropped) spdlog::warn("dropped {} mentions that could not be aligned", dropped);
  if (out.empty()) throw Error(ErrorCode::kEmptyDataset, "no annotated sentences to train on");
  return out;
}

TaggerModel train_sentences(const std::vector<TaggedSentence>& data, TaggerModel model, const TrainConfig& config) {
  config.validate();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data[i].surfaces.empty()) order.push_back(i);
  }
  if (order.empty()) throw Error(ErrorCode::kEmptyDataset, "no tokens to train on");

  Rng rng(config.rng_seed);
  Params grad = zero_like(model.params);
  std::vector<std::size_t> touched;
  std::vector<double> dlogits;
  Pass p;
  const std::size_t L = model.label_count(), d = model.width;
  nlohmann::json curve = nlohmann::json::array();

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      const std::size_t end = std::min(order.size(), b + config.batch_size);
      touched.clear();
      for (std::size_t k = b; k < end; ++k) {
        const auto& s = data[order[k]];
        forward(model, s.surfaces, p, &rng, config.dropout);
        dlogits = p.probs;
        for (std::size_t i = 0; i < p.n; ++i) dlogits[i * L + s.gold[i]] -= 1.0;
        backward(model, p, dlogits, grad, &touched, false);
      }
      const double step = config.learning_rate;
      for (int g = kConv0W; g < kWeightGroupCount; ++g) {
        auto& w = model.params.w[g];
        auto& gw = grad.w[g];
        for (std::size_t i = 0; i < w.size(); ++i) {
          w[i] -= step * gw[i];
          gw[i] = 0.0;
        }
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      auto& E = model.params.w[kEmbed];
      auto& gE = grad.w[kEmbed];
      for (std::size_t r : touched) {
        for (std::size_t j = 0; j < d; ++j) {
          E[r * d + j] -= step * gE[r * d + j];
          gE[r * d + j] = 0.0;
        }
      }
    }
    const double loss = dataset_loss(model, data);
    curve.push_back(loss);
    spdlog::debug("epoch {} loss {:.6f}", epoch + 1, loss);
  }
  model.training_meta = {{"config", config.to_json()}, {"loss_curve", curve}, {"sentences", order.size()}};
  model.validate();
  return model;
}

TaggerModel train(const std::vector<Document>& docs, const AnnotationSet& gold, const TrainConfig& config,
                  const Schema& schema) {
  config.validate();
  TaggerModel model = TaggerModel::create(schema, config.rng_seed, config.rows, config.width);
  const auto data = build_training_sentences(docs, gold, model, schema);
  return train_sentences(data, std::move(model), config);
}

std::vector<double> encode(const TaggerModel& model, const std::vector<double>& embeddings) {
  if (embeddings.size() % model.width != 0) throw Error(ErrorCode::kInvalidArgument, "embedding size mismatch");
  Pass p;
  p.n = embeddings.size() / model.width;
  p.h[0] = embeddings;
  encode_pass(model, p);
  return p.h[kConvLayers];
}

std::vector<double> token_probabilities(const TaggerModel& model, const std::vector<std::string>& surfaces) {
  Pass p;
  forward(model, surfaces, p, nullptr, 0.0);
  return p.probs;
}

std::vector<Mention> predict(const Document& doc, const TaggerModel& model) {
  std::vector<Tag> parsed;
  for (const auto& l : model.labels) parsed.push_back(parse_tag(l));
  const std::size_t L = model.label_count();
  std::vector<Mention> out;
  Pass p;
  for (const auto& group : sentence_tokens(doc)) {
    std::vector<std::string> surfaces;
    for (const auto& t : group) surfaces.push_back(t.surface);
    forward(model, surfaces, p, nullptr, 0.0);
    std::vector<Tag> tags;
    std::vector<double> chosen;
    for (std::size_t i = 0; i < p.n; ++i) {
      const std::size_t best = argmax(&p.probs[i * L], L);
      tags.push_back(parsed[best]);
      chosen.push_back(p.probs[i * L + best]);
    }
    for (const auto& span : decode_bilou(tags)) {
      double score = 0.0;
      for (std::size_t i = span.first; i <= span.last; ++i) score += chosen[i];
      score /= static_cast<double>(span.last - span.first + 1);
      out.push_back(Mention{group[span.first].start, group[span.last].end, span.type, Provenance::kModel, score});
    }
  }
  return out;
}

AnnotationSet extract(const std::vector<Document>& docs, const TaggerModel& model) {
  AnnotationSet set;
  set.annotator_id = "model";
  for (const auto& d : docs) set.entries[d.doc_id] = predict(d, model);
  return set;
}

double sentence_loss(const TaggerModel& model, const TaggedSentence& sentence) {
  if (sentence.surfaces.empty()) return 0.0;
  Pass p;
  forward(model, sentence.surfaces, p, nullptr, 0.0);
  return pass_loss(p, sentence.gold, model.label_count()) / static_cast<double>(p.n);
}

Params loss_gradient(const TaggerModel& model, const TaggedSentence& sentence, bool corrupt_backward) {
  Params g = zero_like(model.params);
  if (sentence.surfaces.empty()) return g;
  Pass p;
  forward(model, sentence.surfaces, p, nullptr, 0.0);
  const std::size_t L = model.label_count();
  std::vector<double> dlogits = p.probs;
  for (std::size_t i = 0; i < p.n; ++i) dlogits[i * L + sentence.gold[i]] -= 1.0;
  const double inv_n = 1.0 / static_cast<double>(p.n);
  for (double& v : dlogits) v *= inv_n;
  backward(model, p, dlogits, g, nullptr, corrupt_backward);
  return g;
}

GradientCheckReport gradient_check(const TaggerModel& model, const TaggedSentence& sentence, double epsilon,
                                   bool corrupt_backward) {
  if (!(epsilon >= 1e-6 && epsilon <= 1e-3)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be in [1e-6, 1e-3]");
  const Params analytic = loss_gradient(model, sentence, corrupt_backward);
  TaggerModel probe = model;
  GradientCheckReport rep;
  for (int g = 0; g < kWeightGroupCount; ++g) {
    auto& w = probe.params.w[g];
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + epsilon;
      const double up = sentence_loss(probe, sentence);
      w[i] = saved - epsilon;
      const double down = sentence_loss(probe, sentence);
      w[i] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic.w[g][i];
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      rep.per_group[g] = std::max(rep.per_group[g], err);
      ++rep.checked;
    }
    rep.max_relative_error = std::max(rep.max_relative_error, rep.per_group[g]);
  }
  return rep;
}

}  // namespace cyents
