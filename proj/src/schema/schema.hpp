#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cyents {

enum class Category { kRegex, kGazetteer, kStatistical, kBuiltinRule };
enum class Origin { kCyber, kGeneral };
enum class SchemaId { kRound1, kRound2 };

const char* to_string(Category c);
const char* to_string(Origin o);
const char* to_string(SchemaId id);
Category parse_category(std::string_view s);
Origin parse_origin(std::string_view s);
SchemaId parse_schema_id(std::string_view s);

struct EntityType {
  std::string name;
  Category category = Category::kStatistical;
  Origin origin = Origin::kCyber;
  std::string description;

  bool operator==(const EntityType&) const = default;
};

// One annotation round's type inventory. Immutable once built.
class Schema {
 public:
  static const Schema& round1();
  static const Schema& round2();
  static const Schema& get(SchemaId id);

  Schema(SchemaId id, std::vector<EntityType> types, std::map<std::string, std::optional<std::string>> migration);

  SchemaId id() const { return id_; }
  const std::vector<EntityType>& types() const { return types_; }

  // Retired label -> replacement (nullopt means DROP). Only round1 carries
  // entries; identity mappings are implicit.
  const std::map<std::string, std::optional<std::string>>& migration() const { return migration_; }

  // Throws Error(kUnknownType).
  const EntityType& lookup(std::string_view name) const;
  const EntityType* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::vector<std::string> names_in(Category category) const;

  nlohmann::json to_json() const;
  static Schema from_json(const nlohmann::json& j);

 private:
  SchemaId id_;
  std::vector<EntityType> types_;
  std::map<std::string, std::optional<std::string>> migration_;
};

// Round-1 label -> round-2 label. nullopt is DROP. Identity on round-2 names;
// throws Error(kUnknownType) for labels in neither version.
std::optional<std::string> migrate_label(std::string_view label);

bool is_valid_type_name(std::string_view name);

}  // namespace cyents
