#include "ner/model.hpp"

#include <cmath>
#include <cstring>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/rng.hpp"
#include "common/strings.hpp"

namespace cyents {
namespace {

constexpr char kMagic[] = "CYENTS01";
constexpr std::size_t kMagicSize = 8;
constexpr int kFormatVersion = 1;

constexpr std::array<std::uint64_t, kHashSeeds> kDefaultSeeds = {
    0x9E3779B97F4A7C15ull, 0xC2B2AE3D27D4EB4Full, 0x165667B19E3779F9ull, 0xD6E8FEB86659FD93ull};

std::array<std::size_t, kWeightGroupCount> group_sizes(std::size_t rows, std::size_t d, std::size_t labels) {
  return {rows * d, kConvWindow * d * d, d, kConvWindow * d * d, d, d * labels, labels};
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(std::string_view in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

}  // namespace

const char* weight_group_name(int group) {
  static const char* names[] = {"embed", "conv0_w", "conv0_b", "conv1_w", "conv1_b", "out_w", "out_b"};
  return names[group];
}

std::string normalize_token(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  bool in_digits = false;
  for (char c : surface) {
    if (is_ascii_digit(c)) {
      if (!in_digits) out.push_back('0');
      in_digits = true;
      continue;
    }
    in_digits = false;
    out.push_back(ascii_lower(c));
  }
  return out;
}

std::vector<std::string> tagger_labels(const Schema& schema) {
  std::vector<std::string> labels{"O"};
  for (const auto& type : schema.names_in(Category::kStatistical)) {
    for (const char* prefix : {"B-", "I-", "L-", "U-"}) labels.push_back(prefix + type);
  }
  return labels;
}

TaggerModel TaggerModel::create(const Schema& schema, std::uint64_t seed, std::size_t rows, std::size_t width) {
  if (rows == 0 || width == 0) throw Error(ErrorCode::kInvalidArgument, "model dimensions must be positive");
  TaggerModel m;
  m.schema_version = schema.id();
  m.labels = tagger_labels(schema);
  m.seeds = kDefaultSeeds;
  m.rows = rows;
  m.width = width;
  const auto sizes = group_sizes(rows, width, m.labels.size());
  for (int g = 0; g < kWeightGroupCount; ++g) m.params.w[g].assign(sizes[g], 0.0);

  Rng rng(seed);
  for (auto& v : m.params.w[kEmbed]) v = rng.uniform(-0.1, 0.1);
  const double conv_scale = 1.0 / std::sqrt(static_cast<double>(kConvWindow * width));
  for (int g : {kConv0W, kConv1W}) {
    for (auto& v : m.params.w[g]) v = rng.uniform(-conv_scale, conv_scale);
  }
  return m;
}

std::array<std::size_t, kHashSeeds> TaggerModel::embed_rows(std::string_view surface) const {
  const std::string norm = normalize_token(surface);
  std::array<std::size_t, kHashSeeds> out{};
  for (std::size_t s = 0; s < kHashSeeds; ++s) out[s] = static_cast<std::size_t>(murmur64a(norm, seeds[s]) % rows);
  return out;
}

std::vector<double> TaggerModel::hash_embed(std::string_view surface) const {
  std::vector<double> v(width, 0.0);
  const auto& table = params.w[kEmbed];
  for (std::size_t r : embed_rows(surface)) {
    for (std::size_t j = 0; j < width; ++j) v[j] += table[r * width + j];
  }
  return v;
}

void TaggerModel::validate() const {
  if (labels.empty() || labels[0] != "O") throw Error(ErrorCode::kInternal, "label list must start with O");
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i].size() < 3 || labels[i][1] != '-') throw Error(ErrorCode::kInternal, "bad label " + labels[i]);
  }
  if ((labels.size() - 1) % 4 != 0) throw Error(ErrorCode::kInternal, "label list not closed under BILOU");
  for (std::size_t i = 1; i < labels.size(); i += 4) {
    const std::string type = labels[i].substr(2);
    const char* prefixes[] = {"B-", "I-", "L-", "U-"};
    for (int k = 0; k < 4; ++k) {
      if (labels[i + k] != prefixes[k] + type) throw Error(ErrorCode::kInternal, "label list not closed under BILOU");
    }
  }
  const auto sizes = group_sizes(rows, width, labels.size());
  for (int g = 0; g < kWeightGroupCount; ++g) {
    if (params.w[g].size() != sizes[g]) {
      throw Error(ErrorCode::kInternal, std::string("weight group ") + weight_group_name(g) + " has the wrong size");
    }
    for (double v : params.w[g]) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kInternal, std::string("non-finite weight in ") + weight_group_name(g));
    }
  }
}

std::string TaggerModel::serialize() const {
  nlohmann::json sections = nlohmann::json::array();
  for (int g = 0; g < kWeightGroupCount; ++g) sections.push_back({{"name", weight_group_name(g)}, {"count", params.w[g].size()}});
  const nlohmann::json header = {{"format_version", kFormatVersion},
                                 {"schema_version", to_string(schema_version)},
                                 {"dims", {{"rows", rows}, {"width", width}, {"conv_layers", kConvLayers},
                                           {"conv_window", kConvWindow}}},
                                 {"seeds", seeds},
                                 {"label_list", labels},
                                 {"sections", sections},
                                 {"training_meta", training_meta}};
  const std::string head = header.dump();
  std::string out(kMagic, kMagicSize);
  put_u64(out, head.size());
  out += head;
  for (const auto& group : params.w) {
    for (double v : group) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      put_u64(out, bits);
    }
  }
  return out;
}

TaggerModel TaggerModel::deserialize(std::string_view bytes) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kParse, "model file: " + why); };
  if (bytes.size() < kMagicSize + 8 || bytes.substr(0, kMagicSize) != std::string_view(kMagic, kMagicSize)) {
    fail("bad magic");
  }
  const std::uint64_t head_len = get_u64(bytes, kMagicSize);
  std::size_t pos = kMagicSize + 8;
  if (head_len > bytes.size() - pos) fail("truncated header");
  TaggerModel m;
  try {
    const auto header = nlohmann::json::parse(bytes.substr(pos, head_len));
    if (header.at("format_version").get<int>() != kFormatVersion) fail("unsupported format version");
    m.schema_version = parse_schema_id(header.at("schema_version").get<std::string>());
    m.rows = header.at("dims").at("rows").get<std::size_t>();
    m.width = header.at("dims").at("width").get<std::size_t>();
    m.seeds = header.at("seeds").get<std::array<std::uint64_t, kHashSeeds>>();
    m.labels = header.at("label_list").get<std::vector<std::string>>();
    m.training_meta = header.value("training_meta", nlohmann::json::object());
    const auto& sections = header.at("sections");
    if (sections.size() != kWeightGroupCount) fail("wrong section count");
    pos += head_len;
    for (int g = 0; g < kWeightGroupCount; ++g) {
      if (sections[g].at("name").get<std::string>() != weight_group_name(g)) fail("unexpected section order");
      const auto count = sections[g].at("count").get<std::size_t>();
      if (count > (bytes.size() - pos) / 8) fail("truncated weights");
      auto& dst = m.params.w[g];
      dst.resize(count);
      for (std::size_t i = 0; i < count; ++i, pos += 8) {
        const std::uint64_t bits = get_u64(bytes, pos);
        std::memcpy(&dst[i], &bits, sizeof bits);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
  if (pos != bytes.size()) fail("trailing bytes");
  try {
    m.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  return m;
}

void TaggerModel::save(const std::string& path) const { write_file_atomic(path, serialize()); }

TaggerModel TaggerModel::load(const std::string& path) { return deserialize(read_file(path)); }

}  // namespace cyents
