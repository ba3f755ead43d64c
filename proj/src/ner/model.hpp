#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "schema/schema.hpp"

namespace cyents {

// Weight groups, in serialization order.
enum WeightGroup { kEmbed, kConv0W, kConv0B, kConv1W, kConv1B, kOutW, kOutB, kWeightGroupCount };
const char* weight_group_name(int group);

struct Params {
  std::array<std::vector<double>, kWeightGroupCount> w;
  bool operator==(const Params&) const = default;
};

inline constexpr std::size_t kConvLayers = 2;
inline constexpr std::size_t kConvWindow = 3;
inline constexpr std::size_t kHashSeeds = 4;

// ASCII case fold, then every run of digits becomes a single "0".
std::string normalize_token(std::string_view surface);

// Label inventory: "O", then B-/I-/L-/U- for every statistical type of the
// schema, in schema order.
std::vector<std::string> tagger_labels(const Schema& schema);

struct TaggerModel {
  SchemaId schema_version = SchemaId::kRound2;
  std::vector<std::string> labels;
  std::array<std::uint64_t, kHashSeeds> seeds{};
  std::size_t rows = 5000;
  std::size_t width = 64;
  Params params;
  nlohmann::json training_meta = nlohmann::json::object();

  // Embedding and convolution weights are drawn from a seeded uniform
  // distribution; the output layer starts at zero.
  static TaggerModel create(const Schema& schema, std::uint64_t seed, std::size_t rows = 5000,
                            std::size_t width = 64);

  std::size_t label_count() const { return labels.size(); }

  // Table rows selected for one token.
  std::array<std::size_t, kHashSeeds> embed_rows(std::string_view surface) const;
  std::vector<double> hash_embed(std::string_view surface) const;

  // Throws kInternal on NaN/Inf or inconsistent shapes or labels.
  void validate() const;

  std::string serialize() const;
  static TaggerModel deserialize(std::string_view bytes);
  void save(const std::string& path) const;
  static TaggerModel load(const std::string& path);

  bool operator==(const TaggerModel&) const = default;
};

}  // namespace cyents
