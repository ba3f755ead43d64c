#include "schema/schema.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "json.hpp"

namespace cyents {

namespace {

struct TypeRow {
  const char* name;
  Category category;
  const char* description;
};

// Cyber types common to both rounds.
const TypeRow kSharedCyber[] = {
    {"Malware_Name", Category::kStatistical, "Proper name of a malware family or sample, e.g. WannaCry, Emotet."},
    {"Malware_Type", Category::kGazetteer, "Generic class of malware, e.g. ransomware, trojan, backdoor."},
    {"Software_Name", Category::kStatistical, "Name of a software product, library or tool, e.g. Microsoft Word, Mimikatz."},
    {"Version_Tag", Category::kStatistical, "Version identifier of software or an operating system, e.g. 2.4.1, SP2."},
    {"Vulnerability", Category::kStatistical, "Named vulnerability or vulnerability description, e.g. Log4Shell, EternalBlue."},
    {"Attack_Type", Category::kGazetteer, "Attack technique or category, e.g. phishing, SQL injection."},
    {"Programming_Language", Category::kGazetteer, "Programming or scripting language, e.g. Python, PowerShell."},
    {"Email", Category::kBuiltinRule, "Email address."},
    {"CVE", Category::kRegex, "CVE identifier of the form CVE-YYYY-NNNN."},
    {"Campaign", Category::kStatistical, "Named attack campaign or operation, e.g. Operation Aurora."},
    {"IP_Address", Category::kRegex, "IPv4 or IPv6 address."},
    {"Protocol", Category::kGazetteer, "Network or application protocol, e.g. HTTP, SMB, DNS."},
    {"Threat_Actor", Category::kStatistical, "Group or individual behind an attack, e.g. Lazarus, APT28."},
    {"Operating_System", Category::kGazetteer, "Operating system, e.g. Windows, Linux, Android."},
    {"Hash", Category::kRegex, "MD5, SHA-1 or SHA-256 digest in hexadecimal."},
    {"URL", Category::kBuiltinRule, "URL with an http, https or ftp scheme."},
    {"Port", Category::kRegex, "Network port number."},
};

const TypeRow kRound2Only[] = {
    {"Path", Category::kStatistical, "File system path or file name, e.g. C:\\Windows\\System32, /tmp/x.sh."},
    {"Function", Category::kStatistical, "Function, method, API call or process routine, e.g. CreateRemoteThread."},
    {"File_Extension", Category::kGazetteer, "File extension, e.g. .exe, .dll."},
};

const TypeRow kRound1Only[] = {
    {"Filename", Category::kStatistical, "Name of a file."},
    {"Filepath", Category::kStatistical, "Full path of a file."},
    {"Tool", Category::kStatistical, "Software tool used by an attacker."},
    {"Process", Category::kStatistical, "Running process or routine."},
};

// The 18-type general-purpose tag set.
const TypeRow kGeneral[] = {
    {"PERSON", Category::kStatistical, "People, including fictional."},
    {"NORP", Category::kStatistical, "Nationalities or religious or political groups."},
    {"FAC", Category::kStatistical, "Buildings, airports, highways, bridges."},
    {"ORG", Category::kStatistical, "Companies, agencies, institutions."},
    {"GPE", Category::kStatistical, "Countries, cities, states."},
    {"LOC", Category::kStatistical, "Non-GPE locations, mountain ranges, bodies of water."},
    {"PRODUCT", Category::kStatistical, "Objects, vehicles, foods (not services)."},
    {"EVENT", Category::kStatistical, "Named hurricanes, battles, wars, sports events."},
    {"WORK_OF_ART", Category::kStatistical, "Titles of books, songs."},
    {"LAW", Category::kStatistical, "Named documents made into laws."},
    {"LANGUAGE", Category::kStatistical, "Any named language."},
    {"DATE", Category::kStatistical, "Absolute or relative dates or periods."},
    {"TIME", Category::kStatistical, "Times smaller than a day."},
    {"PERCENT", Category::kStatistical, "Percentage."},
    {"MONEY", Category::kStatistical, "Monetary values."},
    {"QUANTITY", Category::kStatistical, "Measurements of weight or distance."},
    {"ORDINAL", Category::kStatistical, "first, second, ..."},
    {"CARDINAL", Category::kStatistical, "Numerals that do not fall under another type."},
};

template <std::size_t N>
void append_rows(std::vector<EntityType>& out, const TypeRow (&rows)[N], Origin origin) {
  for (const auto& r : rows) out.push_back(EntityType{r.name, r.category, origin, r.description});
}

Schema build(SchemaId id) {
  std::vector<EntityType> types;
  append_rows(types, kSharedCyber, Origin::kCyber);
  std::map<std::string, std::optional<std::string>> migration;
  if (id == SchemaId::kRound2) {
    append_rows(types, kRound2Only, Origin::kCyber);
  } else {
    append_rows(types, kRound1Only, Origin::kCyber);
    migration = {
        {"Process", "Function"},
        {"Filepath", "Path"},
        {"Tool", "Software_Name"},
        {"Filename", "Path"},
    };
  }
  append_rows(types, kGeneral, Origin::kGeneral);
  return Schema(id, std::move(types), std::move(migration));
}

}  // namespace

const char* to_string(Category c) {
  switch (c) {
    case Category::kRegex: return "regex";
    case Category::kGazetteer: return "gazetteer";
    case Category::kStatistical: return "statistical";
    case Category::kBuiltinRule: return "builtin-rule";
  }
  return "?";
}

const char* to_string(Origin o) { return o == Origin::kCyber ? "cyber" : "general"; }

const char* to_string(SchemaId id) { return id == SchemaId::kRound1 ? "round1" : "round2"; }

Category parse_category(std::string_view s) {
  if (s == "regex") return Category::kRegex;
  if (s == "gazetteer") return Category::kGazetteer;
  if (s == "statistical") return Category::kStatistical;
  if (s == "builtin-rule") return Category::kBuiltinRule;
  throw Error(ErrorCode::kParse, "unknown category '" + std::string(s) + "'");
}

Origin parse_origin(std::string_view s) {
  if (s == "cyber") return Origin::kCyber;
  if (s == "general") return Origin::kGeneral;
  throw Error(ErrorCode::kParse, "unknown origin '" + std::string(s) + "'");
}

SchemaId parse_schema_id(std::string_view s) {
  if (s == "round1") return SchemaId::kRound1;
  if (s == "round2") return SchemaId::kRound2;
  throw Error(ErrorCode::kInvalidArgument, "schema version must be round1 or round2, got '" + std::string(s) + "'");
}

bool is_valid_type_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  });
}

Schema::Schema(SchemaId id, std::vector<EntityType> types,
               std::map<std::string, std::optional<std::string>> migration)
    : id_(id), types_(std::move(types)), migration_(std::move(migration)) {
  std::set<std::string> seen;
  for (const auto& t : types_) {
    if (!is_valid_type_name(t.name)) throw Error(ErrorCode::kInvalidArgument, "invalid type name '" + t.name + "'");
    if (!seen.insert(t.name).second) throw Error(ErrorCode::kInvalidArgument, "duplicate type name '" + t.name + "'");
  }
}

const Schema& Schema::round1() {
  static const Schema s = build(SchemaId::kRound1);
  return s;
}

const Schema& Schema::round2() {
  static const Schema s = build(SchemaId::kRound2);
  return s;
}

const Schema& Schema::get(SchemaId id) { return id == SchemaId::kRound1 ? round1() : round2(); }

const EntityType* Schema::find(std::string_view name) const {
  for (const auto& t : types_)
    if (t.name == name) return &t;
  return nullptr;
}

const EntityType& Schema::lookup(std::string_view name) const {
  if (const auto* t = find(name)) return *t;
  throw Error(ErrorCode::kUnknownType, "unknown entity type '" + std::string(name) + "' in " + to_string(id_));
}

std::vector<std::string> Schema::names_in(Category category) const {
  std::vector<std::string> out;
  for (const auto& t : types_)
    if (t.category == category) out.push_back(t.name);
  return out;
}

nlohmann::json Schema::to_json() const {
  nlohmann::json types = nlohmann::json::array();
  for (const auto& t : types_) {
    types.push_back({{"name", t.name},
                     {"category", to_string(t.category)},
                     {"origin", to_string(t.origin)},
                     {"description", t.description}});
  }
  nlohmann::json migration = nlohmann::json::object();
  for (const auto& [from, to] : migration_) migration[from] = to ? nlohmann::json(*to) : nlohmann::json("DROP");
  return {{"version", to_string(id_)}, {"types", types}, {"migration", migration}};
}

Schema Schema::from_json(const nlohmann::json& j) {
  try {
    std::vector<EntityType> types;
    for (const auto& t : j.at("types")) {
      types.push_back(EntityType{t.at("name").get<std::string>(), parse_category(t.at("category").get<std::string>()),
                                 parse_origin(t.at("origin").get<std::string>()),
                                 t.value("description", std::string())});
    }
    std::map<std::string, std::optional<std::string>> migration;
    if (j.contains("migration")) {
      for (const auto& [from, to] : j.at("migration").items()) {
        const auto target = to.get<std::string>();
        migration[from] = target == "DROP" ? std::nullopt : std::optional<std::string>(target);
      }
    }
    return Schema(parse_schema_id(j.at("version").get<std::string>()), std::move(types), std::move(migration));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed schema document: ") + e.what());
  }
}

std::optional<std::string> migrate_label(std::string_view label) {
  const auto& r1 = Schema::round1();
  if (auto it = r1.migration().find(std::string(label)); it != r1.migration().end()) return it->second;
  if (Schema::round2().contains(label)) return std::string(label);
  throw Error(ErrorCode::kUnknownType, "label '" + std::string(label) + "' is in neither round1 nor round2");
}

}  // namespace cyents
