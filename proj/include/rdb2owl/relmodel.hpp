#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace rdb2owl::relmodel {

struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cell value: either NULL or a string constant. NULL compares equal to
// NULL and sorts before every string, so rows can live in ordered sets.
class Value {
 public:
  Value() : null_(true) {}
  static Value null() { return Value(); }
  static Value of(std::string text) {
    Value v;
    v.null_ = false;
    v.text_ = std::move(text);
    return v;
  }

  bool is_null() const { return null_; }
  const std::string& text() const {
    if (null_) throw std::logic_error("Value::text() on NULL");
    return text_;
  }

  friend bool operator==(const Value& a, const Value& b) {
    return a.null_ == b.null_ && (a.null_ || a.text_ == b.text_);
  }
  friend auto operator<=>(const Value& a, const Value& b) {
    // NULL sorts first.
    if (a.null_ != b.null_) return a.null_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.null_) return std::strong_ordering::equal;
    return a.text_ <=> b.text_;
  }

 private:
  bool null_;
  std::string text_;
};

// Attribute name -> value; the domain is exactly the relation's attributes.
using Row = std::map<std::string, Value>;

struct Tuple {
  std::string id;  // "id1", "id2", ... in document order
  Row values;
};

struct Relation {
  std::string name;
  std::vector<std::string> attributes;  // declared order, preserved everywhere
};

struct Schema {
  std::vector<Relation> relations;

  const Relation* find(const std::string& name) const;
  const Relation& get(const std::string& name) const;  // throws LoadError if absent
  bool has(const std::string& name) const { return find(name) != nullptr; }
};

struct PrimaryKey {
  std::string relation;
  std::vector<std::string> attributes;  // declared key order

  friend bool operator==(const PrimaryKey&, const PrimaryKey&) = default;
};

struct ForeignKey {
  std::string relation;
  std::vector<std::string> attributes;
  std::string ref_relation;
  std::vector<std::string> ref_attributes;

  friend bool operator==(const ForeignKey&, const ForeignKey&) = default;
};

struct Constraints {
  std::vector<PrimaryKey> primary_keys;
  std::vector<ForeignKey> foreign_keys;

  const PrimaryKey* primary_key_of(const std::string& relation) const;
};

// relation name -> tuples in id order; rows deduplicated by value.
using Instance = std::map<std::string, std::vector<Tuple>>;

struct Database {
  std::string base = "http://example.edu/db/";
  Schema schema;
  Constraints constraints;
  Instance instance;
  size_t duplicate_rows_dropped = 0;
};

enum class ViolationKind {
  KeyNull,          // a key attribute holds NULL in some tuple
  KeyDuplicate,     // two distinct tuples agree on all key attributes
  ReferenceDangling,  // a fully non-NULL FK source row has no matching target
  ReferencedNotKey,   // the referenced attribute list is not a satisfied key
};

struct Violation {
  ViolationKind kind;
  std::string description;       // human-readable, names the constraint
  std::string relation;          // relation the offending tuples live in
  std::vector<std::string> tuple_ids;
};

struct SatisfiesResult {
  bool holds = true;
  std::vector<Violation> violations;
};

// Reserved characters are rejected in relation/attribute names ('#', ',',
// '=', '/', whitespace) because they would make generated IRIs ambiguous.
// Names starting with "__" are rejected too: that prefix is reserved for
// internally generated query variables.
bool valid_name(const std::string& name);

// Values used inside row IRIs share the restriction, except '/' is harmless.
bool valid_iri_value(const std::string& text);

// Load/validate a database document. Accepts the object form
// {"base": ..., "relations": [...], "constraints": {...}}.
Database load_database(const nlohmann::json& doc);
Database load_database_file(const std::string& path);

// Inverse of load_database up to duplicate-row removal.
nlohmann::json serialize_database(const Database& db);

// CSV ingestion: `schema_path` holds a document without tuples; each relation
// R is populated from <csv_dir>/R.csv (header row = attribute names).
// Unquoted empty fields are NULL; quoted empty fields are empty strings.
Database load_csv_database(const std::string& schema_path, const std::string& csv_dir);

// Full integrity check: every key holds (no NULLs, no duplicates) and every
// foreign key holds (referenced list is a satisfied key; each fully non-NULL
// source row has a matching target row).
SatisfiesResult satisfies(const Database& db);

// True when, relation by relation, every value-row of `sub` occurs in `super`.
// Both instances must be over the same schema.
bool instance_contained(const Instance& sub, const Instance& super);

}  // namespace rdb2owl::relmodel
