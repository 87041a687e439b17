#include "rdb2owl/relmodel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rdb2owl::relmodel {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw LoadError(msg); }

bool contains_any(const std::string& s, const char* chars) {
  return s.find_first_of(chars) != std::string::npos;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string key_text(const std::string& rel, const std::vector<std::string>& attrs) {
  return rel + "[" + join(attrs, ",") + "]";
}

void check_attr_list(const std::string& what, const Relation& rel,
                     const std::vector<std::string>& attrs) {
  if (attrs.empty()) fail(what + " on " + rel.name + " has an empty attribute list");
  std::set<std::string> seen;
  for (const auto& a : attrs) {
    if (!seen.insert(a).second)
      fail(what + " on " + rel.name + " repeats attribute " + a);
    if (std::find(rel.attributes.begin(), rel.attributes.end(), a) == rel.attributes.end())
      fail(what + " on " + rel.name + " names unknown attribute " + a);
  }
}

}  // namespace

bool valid_name(const std::string& name) {
  // The "__" prefix is reserved for generated query variables.
  return !name.empty() && !contains_any(name, "#,=/ \t\n\r") && name.rfind("__", 0) != 0;
}

bool valid_iri_value(const std::string& text) {
  return !contains_any(text, "#,= \t\n\r");
}

const Relation* Schema::find(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

const Relation& Schema::get(const std::string& name) const {
  const Relation* r = find(name);
  if (!r) fail("unknown relation " + name);
  return *r;
}

const PrimaryKey* Constraints::primary_key_of(const std::string& relation) const {
  for (const auto& pk : primary_keys)
    if (pk.relation == relation) return &pk;
  return nullptr;
}

namespace {

Schema load_schema(const json& doc) {
  Schema schema;
  if (!doc.contains("relations")) fail("document lacks a \"relations\" array");
  const json& rels = doc.at("relations");
  if (!rels.is_array()) fail("\"relations\" must be an array");
  for (const json& jr : rels) {
    if (!jr.is_object()) fail("each relation must be an object");
    Relation rel;
    if (!jr.contains("name") || !jr.at("name").is_string())
      fail("relation lacks a string \"name\"");
    rel.name = jr.at("name").get<std::string>();
    if (!valid_name(rel.name))
      fail("relation name \"" + rel.name + "\" is empty or contains a reserved character");
    if (schema.find(rel.name)) fail("duplicate relation name " + rel.name);
    if (!jr.contains("attributes") || !jr.at("attributes").is_array())
      fail("relation " + rel.name + " lacks an \"attributes\" array");
    for (const json& ja : jr.at("attributes")) {
      if (!ja.is_string()) fail("relation " + rel.name + " has a non-string attribute");
      std::string a = ja.get<std::string>();
      if (!valid_name(a))
        fail("attribute \"" + a + "\" of " + rel.name +
             " is empty or contains a reserved character");
      if (std::find(rel.attributes.begin(), rel.attributes.end(), a) != rel.attributes.end())
        fail("relation " + rel.name + " repeats attribute " + a);
      rel.attributes.push_back(std::move(a));
    }
    if (rel.attributes.empty()) fail("relation " + rel.name + " has no attributes");
    schema.relations.push_back(std::move(rel));
  }
  return schema;
}

Constraints load_constraints(const json& doc, const Schema& schema) {
  Constraints cs;
  if (!doc.contains("constraints")) return cs;
  const json& jc = doc.at("constraints");
  if (!jc.is_object()) fail("\"constraints\" must be an object");

  if (jc.contains("primary_keys")) {
    if (!jc.at("primary_keys").is_array()) fail("\"primary_keys\" must be an array");
    for (const json& jk : jc.at("primary_keys")) {
      PrimaryKey pk;
      if (!jk.is_object() || !jk.contains("relation") || !jk.contains("attributes"))
        fail("each primary key needs \"relation\" and \"attributes\"");
      pk.relation = jk.at("relation").get<std::string>();
      const Relation* rel = schema.find(pk.relation);
      if (!rel) fail("primary key names unknown relation " + pk.relation);
      for (const json& ja : jk.at("attributes")) pk.attributes.push_back(ja.get<std::string>());
      check_attr_list("primary key", *rel, pk.attributes);
      if (std::find(cs.primary_keys.begin(), cs.primary_keys.end(), pk) != cs.primary_keys.end())
        continue;  // exact duplicate: keys form a set
      if (cs.primary_key_of(pk.relation))
        fail("relation " + pk.relation + " has more than one primary key");
      cs.primary_keys.push_back(std::move(pk));
    }
  }

  if (jc.contains("foreign_keys")) {
    if (!jc.at("foreign_keys").is_array()) fail("\"foreign_keys\" must be an array");
    for (const json& jk : jc.at("foreign_keys")) {
      ForeignKey fk;
      if (!jk.is_object() || !jk.contains("relation") || !jk.contains("attributes") ||
          !jk.contains("ref_relation") || !jk.contains("ref_attributes"))
        fail("each foreign key needs \"relation\", \"attributes\", \"ref_relation\", "
             "\"ref_attributes\"");
      fk.relation = jk.at("relation").get<std::string>();
      fk.ref_relation = jk.at("ref_relation").get<std::string>();
      const Relation* src = schema.find(fk.relation);
      if (!src) fail("foreign key names unknown relation " + fk.relation);
      const Relation* dst = schema.find(fk.ref_relation);
      if (!dst) fail("foreign key references unknown relation " + fk.ref_relation);
      for (const json& ja : jk.at("attributes")) fk.attributes.push_back(ja.get<std::string>());
      for (const json& ja : jk.at("ref_attributes"))
        fk.ref_attributes.push_back(ja.get<std::string>());
      check_attr_list("foreign key", *src, fk.attributes);
      check_attr_list("foreign key target", *dst, fk.ref_attributes);
      if (fk.attributes.size() != fk.ref_attributes.size())
        fail("foreign key on " + fk.relation + " has mismatched attribute list lengths");
      if (std::find(cs.foreign_keys.begin(), cs.foreign_keys.end(), fk) != cs.foreign_keys.end())
        continue;  // exact duplicate
      cs.foreign_keys.push_back(std::move(fk));
    }
  }
  return cs;
}

void check_pk_value_texts(const Database& db) {
  for (const PrimaryKey& pk : db.constraints.primary_keys) {
    auto it = db.instance.find(pk.relation);
    if (it == db.instance.end()) continue;
    for (const Tuple& t : it->second) {
      for (const std::string& a : pk.attributes) {
        const Value& v = t.values.at(a);
        if (!v.is_null() && !valid_iri_value(v.text()))
          fail("primary key value \"" + v.text() + "\" in " + pk.relation + "." + a +
               " contains a reserved character");
      }
    }
  }
}

}  // namespace

Database load_database(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("document root must be an object");
  Database db;
  if (doc.contains("base")) {
    if (!doc.at("base").is_string()) fail("\"base\" must be a string");
    db.base = doc.at("base").get<std::string>();
    if (db.base.empty() || contains_any(db.base, " \t\n\r\"<>"))
      fail("\"base\" is empty or contains characters not allowed in an IRI");
  }
  db.schema = load_schema(doc);
  db.constraints = load_constraints(doc, db.schema);

  for (const json& jr : doc.at("relations")) {
    const std::string name = jr.at("name").get<std::string>();
    const Relation& rel = db.schema.get(name);
    std::vector<Tuple>& rows = db.instance[name];
    std::set<Row> seen;
    if (jr.contains("tuples")) {
      if (!jr.at("tuples").is_array()) fail("\"tuples\" of " + name + " must be an array");
      for (const json& jt : jr.at("tuples")) {
        if (!jt.is_array() || jt.size() != rel.attributes.size())
          fail("a tuple of " + name + " does not match its arity of " +
               std::to_string(rel.attributes.size()));
        Row row;
        for (size_t i = 0; i < rel.attributes.size(); ++i) {
          const json& jv = jt[i];
          if (jv.is_null())
            row[rel.attributes[i]] = Value::null();
          else if (jv.is_string())
            row[rel.attributes[i]] = Value::of(jv.get<std::string>());
          else
            fail("tuple values of " + name + " must be strings or null");
        }
        if (!seen.insert(row).second) {
          ++db.duplicate_rows_dropped;
          continue;
        }
        Tuple t;
        t.id = "id" + std::to_string(rows.size() + 1);
        t.values = std::move(row);
        rows.push_back(std::move(t));
      }
    }
  }
  check_pk_value_texts(db);
  return db;
}

Database load_database_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(path + ": invalid JSON: " + e.what());
  }
  return load_database(doc);
}

nlohmann::json serialize_database(const Database& db) {
  json doc;
  doc["base"] = db.base;
  json rels = json::array();
  for (const Relation& rel : db.schema.relations) {
    json jr;
    jr["name"] = rel.name;
    jr["attributes"] = rel.attributes;
    json tuples = json::array();
    auto it = db.instance.find(rel.name);
    if (it != db.instance.end()) {
      for (const Tuple& t : it->second) {
        json jt = json::array();
        for (const std::string& a : rel.attributes) {
          const Value& v = t.values.at(a);
          if (v.is_null())
            jt.push_back(nullptr);
          else
            jt.push_back(v.text());
        }
        tuples.push_back(std::move(jt));
      }
    }
    jr["tuples"] = std::move(tuples);
    rels.push_back(std::move(jr));
  }
  doc["relations"] = std::move(rels);
  json pks = json::array();
  for (const PrimaryKey& pk : db.constraints.primary_keys)
    pks.push_back({{"relation", pk.relation}, {"attributes", pk.attributes}});
  json fks = json::array();
  for (const ForeignKey& fk : db.constraints.foreign_keys)
    fks.push_back({{"relation", fk.relation},
                   {"attributes", fk.attributes},
                   {"ref_relation", fk.ref_relation},
                   {"ref_attributes", fk.ref_attributes}});
  doc["constraints"] = {{"primary_keys", std::move(pks)}, {"foreign_keys", std::move(fks)}};
  return doc;
}

namespace {

// Minimal RFC-4180 reader; returns one record per row, supporting quoted
// fields (with "" escapes and embedded newlines). `was_quoted` distinguishes
// a quoted empty string from an unquoted empty field (NULL).
struct CsvField {
  std::string text;
  bool quoted = false;
};

std::vector<std::vector<CsvField>> parse_csv(const std::string& content, const std::string& where) {
  std::vector<std::vector<CsvField>> records;
  std::vector<CsvField> record;
  CsvField field;
  size_t i = 0;
  bool in_quotes = false;
  bool any = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field = {};
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  while (i < content.size()) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.text.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field.text.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.text.empty()) throw LoadError(where + ": stray quote inside unquoted field");
        field.quoted = true;
        in_quotes = true;
        any = true;
        ++i;
        break;
      case ',':
        end_field();
        any = true;
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        if (any || !field.text.empty() || !record.empty()) end_record();
        any = false;
        ++i;
        break;
      default:
        field.text.push_back(c);
        any = true;
        ++i;
    }
  }
  if (in_quotes) throw LoadError(where + ": unterminated quoted field");
  if (any || !field.text.empty() || !record.empty()) end_record();
  return records;
}

}  // namespace

Database load_csv_database(const std::string& schema_path, const std::string& csv_dir) {
  std::ifstream in(schema_path);
  if (!in) fail("cannot open " + schema_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(schema_path + ": invalid JSON: " + e.what());
  }
  // Ignore any inline tuples: CSV files are the instance of record here.
  if (doc.contains("relations"))
    for (json& jr : doc.at("relations")) jr.erase("tuples");
  Database db = load_database(doc);

  for (const Relation& rel : db.schema.relations) {
    std::string path = csv_dir + "/" + rel.name + ".csv";
    std::ifstream csv(path);
    if (!csv) fail("cannot open " + path);
    std::stringstream buf;
    buf << csv.rdbuf();
    auto records = parse_csv(buf.str(), path);
    if (records.empty()) fail(path + ": missing header row");
    const auto& header = records.front();
    if (header.size() != rel.attributes.size())
      fail(path + ": header does not match the declared attributes of " + rel.name);
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i].text != rel.attributes[i])
        fail(path + ": header column " + std::to_string(i + 1) + " is \"" + header[i].text +
             "\" but the schema declares \"" + rel.attributes[i] + "\"");

    std::vector<Tuple>& rows = db.instance[rel.name];
    std::set<Row> seen;
    for (size_t r = 1; r < records.size(); ++r) {
      const auto& rec = records[r];
      if (rec.size() != rel.attributes.size())
        fail(path + ": record " + std::to_string(r + 1) + " does not match arity");
      Row row;
      for (size_t i = 0; i < rec.size(); ++i) {
        if (!rec[i].quoted && rec[i].text.empty())
          row[rel.attributes[i]] = Value::null();
        else
          row[rel.attributes[i]] = Value::of(rec[i].text);
      }
      if (!seen.insert(row).second) {
        ++db.duplicate_rows_dropped;
        continue;
      }
      Tuple t;
      t.id = "id" + std::to_string(rows.size() + 1);
      t.values = std::move(row);
      rows.push_back(std::move(t));
    }
  }
  check_pk_value_texts(db);
  return db;
}

namespace {

// Checks the key condition for an arbitrary attribute list (declared PKs and
// foreign-key targets alike). Appends violations; returns whether it holds.
bool key_holds(const Database& db, const std::string& relation,
               const std::vector<std::string>& attrs, const std::string& label,
               std::vector<Violation>* out) {
  bool ok = true;
  auto it = db.instance.find(relation);
  static const std::vector<Tuple> kEmpty;
  const std::vector<Tuple>& rows = it == db.instance.end() ? kEmpty : it->second;

  for (const Tuple& t : rows) {
    for (const std::string& a : attrs) {
      if (t.values.at(a).is_null()) {
        ok = false;
        if (out)
          out->push_back({ViolationKind::KeyNull,
                          "key " + label + ": attribute " + a + " is NULL in tuple " + t.id,
                          relation,
                          {t.id}});
      }
    }
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = i + 1; j < rows.size(); ++j) {
      bool agree = true;
      for (const std::string& a : attrs)
        if (!(rows[i].values.at(a) == rows[j].values.at(a))) {
          agree = false;
          break;
        }
      if (agree) {
        ok = false;
        if (out)
          out->push_back({ViolationKind::KeyDuplicate,
                          "key " + label + ": tuples " + rows[i].id + " and " + rows[j].id +
                              " agree on all key attributes",
                          relation,
                          {rows[i].id, rows[j].id}});
      }
    }
  }
  return ok;
}

}  // namespace

SatisfiesResult satisfies(const Database& db) {
  SatisfiesResult res;
  for (const PrimaryKey& pk : db.constraints.primary_keys)
    key_holds(db, pk.relation, pk.attributes, key_text(pk.relation, pk.attributes),
              &res.violations);

  for (const ForeignKey& fk : db.constraints.foreign_keys) {
    const std::string label = key_text(fk.relation, fk.attributes) + " REFERENCES " +
                              key_text(fk.ref_relation, fk.ref_attributes);
    if (!key_holds(db, fk.ref_relation, fk.ref_attributes, label, nullptr)) {
      res.violations.push_back({ViolationKind::ReferencedNotKey,
                                "foreign key " + label + ": referenced attribute list is not a "
                                "satisfied key of " + fk.ref_relation,
                                fk.ref_relation,
                                {}});
    }
    auto sit = db.instance.find(fk.relation);
    auto tit = db.instance.find(fk.ref_relation);
    static const std::vector<Tuple> kEmpty;
    const auto& src = sit == db.instance.end() ? kEmpty : sit->second;
    const auto& dst = tit == db.instance.end() ? kEmpty : tit->second;
    for (const Tuple& t : src) {
      bool has_null = false;
      for (const std::string& a : fk.attributes)
        if (t.values.at(a).is_null()) {
          has_null = true;
          break;
        }
      if (has_null) continue;  // rows with a NULL FK value satisfy the reference
      bool matched = false;
      for (const Tuple& s : dst) {
        bool all = true;
        for (size_t i = 0; i < fk.attributes.size(); ++i)
          if (!(t.values.at(fk.attributes[i]) == s.values.at(fk.ref_attributes[i]))) {
            all = false;
            break;
          }
        if (all) {
          matched = true;
          break;
        }
      }
      if (!matched) {
        res.violations.push_back({ViolationKind::ReferenceDangling,
                                  "foreign key " + label + ": tuple " + t.id + " of " +
                                      fk.relation + " has no matching tuple in " +
                                      fk.ref_relation,
                                  fk.relation,
                                  {t.id}});
      }
    }
  }
  res.holds = res.violations.empty();
  return res;
}

bool instance_contained(const Instance& sub, const Instance& super) {
  for (const auto& [rel, rows] : sub) {
    auto it = super.find(rel);
    std::set<Row> have;
    if (it != super.end())
      for (const Tuple& t : it->second) have.insert(t.values);
    for (const Tuple& t : rows)
      if (!have.count(t.values)) return false;
  }
  return true;
}

}  // namespace rdb2owl::relmodel
