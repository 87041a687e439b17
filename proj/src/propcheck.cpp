#include "rdb2owl/propcheck.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rdb2owl/inverse.hpp"
#include "rdb2owl/ra2sparql.hpp"
#include "rdb2owl/sparql.hpp"

namespace rdb2owl::propcheck {

namespace {

using nlohmann::json;
using relalg::ExprPtr;
using relmodel::Database;
using relmodel::ForeignKey;
using relmodel::Relation;
using relmodel::Row;
using relmodel::Tuple;
using relmodel::Value;

const char* kAttrPool[] = {"A", "B", "C", "D", "E", "F", "G", "H"};
constexpr size_t kAttrPoolSize = 8;
constexpr size_t kValuePoolSize = 10;  // v0..v9

std::string pool_value(size_t i) { return "v" + std::to_string(i % kValuePoolSize); }

// ---------------------------------------------------------------------------
// Database generation
// ---------------------------------------------------------------------------

// Raw pre-validation form: rows are value vectors aligned with the
// attribute list, so the repair loop can edit in place.
struct RawDatabase {
  relmodel::Schema schema;
  relmodel::Constraints cs;
  std::map<std::string, std::vector<std::vector<Value>>> rows;
};

std::vector<size_t> attr_indices(const Relation& rel, const std::vector<std::string>& attrs) {
  std::vector<size_t> idx;
  for (const std::string& a : attrs) {
    auto it = std::find(rel.attributes.begin(), rel.attributes.end(), a);
    idx.push_back(static_cast<size_t>(it - rel.attributes.begin()));
  }
  return idx;
}

// Fisher-Yates prefix: k distinct picks from items, order randomized.
std::vector<std::string> pick_distinct(Rng& rng, std::vector<std::string> items, size_t k) {
  for (size_t i = 0; i < k; ++i) std::swap(items[i], items[i + rng.below(items.size() - i)]);
  items.resize(k);
  return items;
}

void drop_key_violations(RawDatabase& raw) {
  for (const relmodel::PrimaryKey& pk : raw.cs.primary_keys) {
    const Relation& rel = raw.schema.get(pk.relation);
    std::vector<size_t> idx = attr_indices(rel, pk.attributes);
    auto& rows = raw.rows[pk.relation];
    std::set<std::vector<Value>> seen;
    std::vector<std::vector<Value>> kept;
    for (auto& row : rows) {
      bool has_null = false;
      std::vector<Value> key;
      for (size_t i : idx) {
        if (row[i].is_null()) has_null = true;
        key.push_back(row[i]);
      }
      if (has_null || !seen.insert(key).second) continue;
      kept.push_back(std::move(row));
    }
    rows = std::move(kept);
  }
}

// One repair sweep per foreign key: give every fully non-NULL source row a
// matching target row, inserting stubs (referenced values set, the rest
// NULL). Returns true when something was inserted.
bool insert_referenced_rows(RawDatabase& raw) {
  bool changed = false;
  for (const ForeignKey& fk : raw.cs.foreign_keys) {
    const Relation& src_rel = raw.schema.get(fk.relation);
    const Relation& dst_rel = raw.schema.get(fk.ref_relation);
    std::vector<size_t> src_idx = attr_indices(src_rel, fk.attributes);
    std::vector<size_t> dst_idx = attr_indices(dst_rel, fk.ref_attributes);
    for (size_t r = 0; r < raw.rows[fk.relation].size(); ++r) {
      std::vector<Value> key;
      bool has_null = false;
      for (size_t i : src_idx) {
        const Value& v = raw.rows[fk.relation][r][i];
        if (v.is_null()) has_null = true;
        key.push_back(v);
      }
      if (has_null) continue;
      bool matched = false;
      for (const auto& drow : raw.rows[fk.ref_relation]) {
        bool all = true;
        for (size_t i = 0; i < dst_idx.size(); ++i)
          if (!(drow[dst_idx[i]] == key[i])) {
            all = false;
            break;
          }
        if (all) {
          matched = true;
          break;
        }
      }
      if (matched) continue;
      std::vector<Value> stub(dst_rel.attributes.size(), Value::null());
      for (size_t i = 0; i < dst_idx.size(); ++i) stub[dst_idx[i]] = key[i];
      raw.rows[fk.ref_relation].push_back(std::move(stub));
      changed = true;
    }
  }
  return changed;
}

// Last resort of the repair loop: drop source rows that still dangle.
bool drop_dangling_rows(RawDatabase& raw) {
  bool changed = false;
  for (const ForeignKey& fk : raw.cs.foreign_keys) {
    const Relation& src_rel = raw.schema.get(fk.relation);
    const Relation& dst_rel = raw.schema.get(fk.ref_relation);
    std::vector<size_t> src_idx = attr_indices(src_rel, fk.attributes);
    std::vector<size_t> dst_idx = attr_indices(dst_rel, fk.ref_attributes);
    // Snapshot the target side: a self-referencing key would otherwise read
    // rows this very loop is moving out.
    const std::vector<std::vector<Value>> targets = raw.rows[fk.ref_relation];
    auto& rows = raw.rows[fk.relation];
    std::vector<std::vector<Value>> kept;
    for (auto& row : rows) {
      bool has_null = false;
      for (size_t i : src_idx)
        if (row[i].is_null()) has_null = true;
      bool matched = false;
      if (!has_null) {
        for (const auto& drow : targets) {
          bool all = true;
          for (size_t i = 0; i < dst_idx.size(); ++i)
            if (!(drow[dst_idx[i]] == row[src_idx[i]])) {
              all = false;
              break;
            }
          if (all) {
            matched = true;
            break;
          }
        }
      }
      if (has_null || matched)
        kept.push_back(std::move(row));
      else
        changed = true;
    }
    rows = std::move(kept);
  }
  return changed;
}

void repair(RawDatabase& raw) {
  drop_key_violations(raw);
  for (int pass = 0; pass < 10; ++pass)
    if (!insert_referenced_rows(raw)) break;
  while (drop_dangling_rows(raw)) {
  }
}

json raw_to_json(const RawDatabase& raw) {
  json doc;
  json rels = json::array();
  for (const Relation& rel : raw.schema.relations) {
    json jr;
    jr["name"] = rel.name;
    jr["attributes"] = rel.attributes;
    json tuples = json::array();
    auto it = raw.rows.find(rel.name);
    if (it != raw.rows.end())
      for (const auto& row : it->second) {
        json jt = json::array();
        for (const Value& v : row)
          if (v.is_null())
            jt.push_back(nullptr);
          else
            jt.push_back(v.text());
        tuples.push_back(std::move(jt));
      }
    jr["tuples"] = std::move(tuples);
    rels.push_back(std::move(jr));
  }
  doc["relations"] = std::move(rels);
  json pks = json::array();
  for (const auto& pk : raw.cs.primary_keys)
    pks.push_back({{"relation", pk.relation}, {"attributes", pk.attributes}});
  json fks = json::array();
  for (const auto& fk : raw.cs.foreign_keys)
    fks.push_back({{"relation", fk.relation},
                   {"attributes", fk.attributes},
                   {"ref_relation", fk.ref_relation},
                   {"ref_attributes", fk.ref_attributes}});
  doc["constraints"] = {{"primary_keys", std::move(pks)}, {"foreign_keys", std::move(fks)}};
  return doc;
}

}  // namespace

uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

size_t Rng::below(size_t n) { return n == 0 ? 0 : static_cast<size_t>(next() % n); }

bool Rng::chance(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
}

std::string variant_name(directmap::Variant v) {
  switch (v) {
    case directmap::Variant::Dm:
      return "dm";
    case directmap::Variant::DmPk:
      return "dm-pk";
    case directmap::Variant::DmPkFk:
      return "dm-pk-fk";
  }
  return "?";
}

relmodel::Database gen_random_database(const GeneratorParams& p) {
  Rng rng(p.seed);
  return gen_random_database(rng, p);
}

relmodel::Database gen_random_database(Rng& rng, const GeneratorParams& p) {
  RawDatabase raw;
  const size_t nrel = 1 + rng.below(std::max<size_t>(p.max_relations, 1));
  const size_t max_attrs = std::min(std::max<size_t>(p.max_attributes, 1), kAttrPoolSize);
  std::vector<std::string> pool(kAttrPool, kAttrPool + kAttrPoolSize);

  for (size_t i = 0; i < nrel; ++i) {
    Relation rel;
    rel.name = "R" + std::to_string(i + 1);
    rel.attributes = pick_distinct(rng, pool, 1 + rng.below(max_attrs));
    if (rng.chance(p.pk_probability)) {
      size_t klen = (rel.attributes.size() >= 2 && rng.chance(0.25)) ? 2 : 1;
      raw.cs.primary_keys.push_back({rel.name, pick_distinct(rng, rel.attributes, klen)});
    }
    raw.schema.relations.push_back(std::move(rel));
  }

  // Foreign keys always reference the full declared key of their target.
  for (const Relation& src : raw.schema.relations)
    for (const Relation& dst : raw.schema.relations) {
      const relmodel::PrimaryKey* pk = raw.cs.primary_key_of(dst.name);
      if (!pk || pk->attributes.size() > src.attributes.size()) continue;
      if (!rng.chance(p.fk_density)) continue;
      raw.cs.foreign_keys.push_back(
          {src.name, pick_distinct(rng, src.attributes, pk->attributes.size()), dst.name,
           pk->attributes});
    }

  // Occasionally add a bridge relation between two single-attribute-key
  // relations. It comes last, so nothing references it.
  if (rng.chance(0.5)) {
    std::vector<std::string> candidates;
    for (const Relation& rel : raw.schema.relations) {
      const relmodel::PrimaryKey* pk = raw.cs.primary_key_of(rel.name);
      if (pk && pk->attributes.size() == 1) candidates.push_back(rel.name);
    }
    if (!candidates.empty()) {
      const std::string s = candidates[rng.below(candidates.size())];
      const std::string t = candidates[rng.below(candidates.size())];
      Relation bridge{"M1", {"P", "Q"}};
      raw.cs.primary_keys.push_back({bridge.name, {"P", "Q"}});
      raw.cs.foreign_keys.push_back(
          {bridge.name, {"P"}, s, raw.cs.primary_key_of(s)->attributes});
      raw.cs.foreign_keys.push_back(
          {bridge.name, {"Q"}, t, raw.cs.primary_key_of(t)->attributes});
      raw.schema.relations.push_back(std::move(bridge));
    }
  }

  for (const Relation& rel : raw.schema.relations) {
    auto& rows = raw.rows[rel.name];
    const size_t nrows = rng.below(p.max_rows + 1);
    for (size_t r = 0; r < nrows; ++r) {
      std::vector<Value> row;
      for (size_t c = 0; c < rel.attributes.size(); ++c)
        row.push_back(rng.chance(p.null_probability) ? Value::null()
                                                     : Value::of(pool_value(rng.below(10))));
      rows.push_back(std::move(row));
    }
  }

  if (p.constraint_satisfying) {
    repair(raw);
    Database db = relmodel::load_database(raw_to_json(raw));
    if (!relmodel::satisfies(db).holds)
      throw std::logic_error("generator repair left a constraint violation");
    return db;
  }
  return relmodel::load_database(raw_to_json(raw));
}

// ---------------------------------------------------------------------------
// Query generation
// ---------------------------------------------------------------------------

namespace {

// Structural copy that re-rolls selection conditions half the time; the
// attribute set is unchanged, so the copy stays union/difference-compatible
// with the original.
ExprPtr perturb_selections(Rng& rng, const ExprPtr& e) {
  return std::visit(
      [&](const auto& node) -> ExprPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, relalg::BaseRelation>) {
          return relalg::base(node.name);
        } else if constexpr (std::is_same_v<T, relalg::NullRel>) {
          return relalg::nullrel(node.attr);
        } else if constexpr (std::is_same_v<T, relalg::Select>) {
          relalg::SelCondition cond = node.cond;
          if (rng.chance(0.5)) {
            switch (rng.below(4)) {
              case 0:
                cond = {relalg::SelKind::Eq, cond.attr, pool_value(rng.below(10))};
                break;
              case 1:
                cond = {relalg::SelKind::Neq, cond.attr, pool_value(rng.below(10))};
                break;
              case 2:
                cond = {relalg::SelKind::IsNull, cond.attr, ""};
                break;
              default:
                cond = {relalg::SelKind::IsNotNull, cond.attr, ""};
                break;
            }
          }
          return relalg::select(cond, perturb_selections(rng, node.child));
        } else if constexpr (std::is_same_v<T, relalg::Project>) {
          return relalg::project(node.attrs, perturb_selections(rng, node.child));
        } else if constexpr (std::is_same_v<T, relalg::Rename>) {
          return relalg::rename(node.from, node.to, perturb_selections(rng, node.child));
        } else if constexpr (std::is_same_v<T, relalg::Join>) {
          return relalg::join(perturb_selections(rng, node.left),
                              perturb_selections(rng, node.right));
        } else if constexpr (std::is_same_v<T, relalg::Union>) {
          return relalg::set_union(perturb_selections(rng, node.left),
                                   perturb_selections(rng, node.right));
        } else {
          static_assert(std::is_same_v<T, relalg::Difference>);
          return relalg::difference(perturb_selections(rng, node.left),
                                    perturb_selections(rng, node.right));
        }
      },
      e->node);
}

ExprPtr gen_query_impl(Rng& rng, const Database& db, size_t depth) {
  const auto& rels = db.schema.relations;
  auto random_base = [&] { return relalg::base(rels[rng.below(rels.size())].name); };
  if (depth == 0) return random_base();

  auto child = [&] { return gen_query_impl(rng, db, depth - 1); };
  auto atts = [&](const ExprPtr& e) { return relalg::attributes(e, db.schema); };
  auto pick_attr = [&](const std::set<std::string>& att) {
    size_t i = rng.below(att.size());
    return *std::next(att.begin(), static_cast<long>(i));
  };

  const size_t roll = rng.below(100);
  if (roll < 40) {
    ExprPtr e = random_base();
    // Occasionally pad with a fresh all-NULL column.
    std::set<std::string> att = atts(e);
    if (rng.chance(0.10)) {
      for (const char* extra : {"N", "Z", "Y"})
        if (!att.count(extra)) return relalg::join(e, relalg::nullrel(extra));
    }
    return e;
  }
  if (roll < 60) {
    ExprPtr e = child();
    std::string attr = pick_attr(atts(e));
    switch (rng.below(4)) {
      case 0:
        return relalg::select({relalg::SelKind::Eq, attr, pool_value(rng.below(10))}, e);
      case 1:
        return relalg::select({relalg::SelKind::Neq, attr, pool_value(rng.below(10))}, e);
      case 2:
        return relalg::select({relalg::SelKind::IsNull, attr, ""}, e);
      default:
        return relalg::select({relalg::SelKind::IsNotNull, attr, ""}, e);
    }
  }
  if (roll < 75) {
    ExprPtr l = child(), r = child();
    if (rng.chance(0.10)) {
      std::set<std::string> la = atts(l), ra = atts(r);
      bool shared = std::any_of(la.begin(), la.end(),
                                [&](const std::string& a) { return ra.count(a) > 0; });
      if (shared) return relalg::desugar_left_outer_join(l, r, db.schema);
    }
    return relalg::join(l, r);
  }
  if (roll < 90) {
    ExprPtr e = child();
    std::set<std::string> att = atts(e);
    if (rng.chance(0.5)) {
      std::string from = pick_attr(att);
      for (const char* to : {"W", "X", "Y", "Z", "A", "B"})
        if (!att.count(to)) return relalg::rename(from, to, e);
    }
    std::vector<std::string> all(att.begin(), att.end());
    return relalg::project(pick_distinct(rng, all, 1 + rng.below(all.size())), e);
  }
  if (roll < 95) {
    ExprPtr l = child();
    ExprPtr r = rng.chance(0.10) ? l : perturb_selections(rng, l);
    return relalg::set_union(l, r);
  }
  ExprPtr l = child();
  std::set<std::string> att = atts(l);
  if (att.size() > 3) {
    std::vector<std::string> all(att.begin(), att.end());
    l = relalg::project(pick_distinct(rng, all, 1 + rng.below(3)), l);
  }
  ExprPtr r = rng.chance(0.10) ? l : perturb_selections(rng, l);
  return relalg::difference(l, r);
}

}  // namespace

relalg::ExprPtr gen_random_query(Rng& rng, const Database& db, size_t max_depth) {
  if (db.schema.relations.empty())
    throw std::logic_error("cannot generate a query over an empty schema");
  ExprPtr q = gen_query_impl(rng, db, max_depth);
  relalg::attributes(q, db.schema);  // generator must only produce well-formed queries
  return q;
}

void record_query_coverage(const relalg::ExprPtr& q, const Database& db,
                           std::map<std::string, size_t>& coverage) {
  directmap::Ontology onto = directmap::extract_ontology(db.schema, db.constraints);
  std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, relalg::BaseRelation>) {
            ++coverage[onto.binary_relation_of(node.name) ? "query-base-bridge"
                                                          : "query-base-class"];
          } else if constexpr (std::is_same_v<T, relalg::NullRel>) {
            ++coverage["query-nullrel"];
          } else if constexpr (std::is_same_v<T, relalg::Select>) {
            switch (node.cond.kind) {
              case relalg::SelKind::Eq:
                ++coverage["query-select-eq"];
                break;
              case relalg::SelKind::Neq:
                ++coverage["query-select-neq"];
                break;
              case relalg::SelKind::IsNull:
                ++coverage["query-select-isnull"];
                break;
              case relalg::SelKind::IsNotNull:
                ++coverage["query-select-isnotnull"];
                break;
            }
            walk(node.child);
          } else if constexpr (std::is_same_v<T, relalg::Project>) {
            ++coverage["query-project"];
            walk(node.child);
          } else if constexpr (std::is_same_v<T, relalg::Rename>) {
            ++coverage["query-rename"];
            walk(node.child);
          } else if constexpr (std::is_same_v<T, relalg::Join>) {
            std::set<std::string> la = relalg::attributes(node.left, db.schema);
            std::set<std::string> ra = relalg::attributes(node.right, db.schema);
            bool shared = std::any_of(la.begin(), la.end(),
                                      [&](const std::string& a) { return ra.count(a) > 0; });
            ++coverage[shared ? "query-join-shared" : "query-join-disjoint"];
            walk(node.left);
            walk(node.right);
          } else if constexpr (std::is_same_v<T, relalg::Union>) {
            ++coverage["query-union"];
            walk(node.left);
            walk(node.right);
          } else {
            static_assert(std::is_same_v<T, relalg::Difference>);
            ++coverage["query-difference"];
            walk(node.left);
            walk(node.right);
          }
        },
        e->node);
  };
  walk(q);
}

// ---------------------------------------------------------------------------
// Minimization
// ---------------------------------------------------------------------------

namespace {

Database remove_tuple(const Database& db, const std::string& rel, size_t index) {
  Database out = db;
  auto& rows = out.instance[rel];
  rows.erase(rows.begin() + static_cast<long>(index));
  return out;
}

Database remove_relation(const Database& db, const std::string& rel) {
  Database out = db;
  auto& rels = out.schema.relations;
  rels.erase(std::remove_if(rels.begin(), rels.end(),
                            [&](const Relation& r) { return r.name == rel; }),
             rels.end());
  auto& pks = out.constraints.primary_keys;
  pks.erase(std::remove_if(pks.begin(), pks.end(),
                           [&](const relmodel::PrimaryKey& pk) { return pk.relation == rel; }),
            pks.end());
  auto& fks = out.constraints.foreign_keys;
  fks.erase(std::remove_if(fks.begin(), fks.end(),
                           [&](const ForeignKey& fk) {
                             return fk.relation == rel || fk.ref_relation == rel;
                           }),
            fks.end());
  out.instance.erase(rel);
  return out;
}

}  // namespace

Database minimize_database(Database db,
                           const std::function<bool(const Database&)>& fails,
                           size_t budget) {
  auto still_fails = [&](const Database& cand) {
    if (budget == 0) return false;
    --budget;
    try {
      return fails(cand);
    } catch (...) {
      return false;
    }
  };

  bool improved = true;
  while (improved && budget > 0) {
    improved = false;
    for (const Relation& rel : std::vector<Relation>(db.schema.relations)) {
      size_t i = 0;
      while (i < db.instance[rel.name].size()) {
        Database cand = remove_tuple(db, rel.name, i);
        if (still_fails(cand)) {
          db = std::move(cand);
          improved = true;
        } else {
          ++i;
        }
      }
    }
    for (const Relation& rel : std::vector<Relation>(db.schema.relations)) {
      Database cand = remove_relation(db, rel.name);
      if (cand.schema.relations.empty()) continue;
      if (still_fails(cand)) {
        db = std::move(cand);
        improved = true;
      }
    }
  }
  return db;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

nlohmann::json PropertyReport::to_json() const {
  json jf = json::array();
  for (const Counterexample& c : failures)
    jf.push_back({{"description", c.description},
                  {"database", c.database},
                  {"query", c.query},
                  {"expected", c.expected},
                  {"actual", c.actual}});
  return json{{"property", property}, {"variant", variant},   {"trials", trials},
              {"passed", passed()},   {"failures", jf},       {"coverage", coverage},
              {"details", details}};
}

std::string PropertyReport::to_text() const {
  std::ostringstream out;
  out << property << " [" << variant << "]: " << (passed() ? "PASS" : "FAIL") << " ("
      << trials << " trials";
  if (!failures.empty()) out << ", " << failures.size() << " failures";
  out << ")\n";
  for (const Counterexample& c : failures) {
    out << "  failure: " << c.description << "\n";
    out << "  database: " << c.database.dump() << "\n";
    if (!c.query.empty()) out << "  query: " << c.query << "\n";
    out << "  expected: " << c.expected.dump() << "\n";
    out << "  actual:   " << c.actual.dump() << "\n";
  }
  if (!details.empty()) out << "  details: " << details.dump() << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Property checks
// ---------------------------------------------------------------------------

namespace {

json instance_to_json(const Database& db) {
  json out = json::object();
  for (const Relation& rel : db.schema.relations) {
    json rows = json::array();
    auto it = db.instance.find(rel.name);
    if (it != db.instance.end())
      for (const Tuple& t : it->second) {
        json row = json::object();
        for (const auto& [a, v] : t.values) row[a] = v.is_null() ? json(nullptr) : json(v.text());
        rows.push_back(std::move(row));
      }
    out[rel.name] = std::move(rows);
  }
  return out;
}

// Schema as name -> attribute set, instance as value sets: the notions of
// equality the recovery round trip promises.
bool same_recovered_shape(const Database& original, const Database& recovered) {
  if (original.schema.relations.size() != recovered.schema.relations.size()) return false;
  for (const Relation& rel : original.schema.relations) {
    const Relation* rec = recovered.schema.find(rel.name);
    if (!rec) return false;
    if (std::set<std::string>(rel.attributes.begin(), rel.attributes.end()) !=
        std::set<std::string>(rec->attributes.begin(), rec->attributes.end()))
      return false;
  }
  return relmodel::instance_contained(original.instance, recovered.instance) &&
         relmodel::instance_contained(recovered.instance, original.instance);
}

bool roundtrip_ok(const Database& db) {
  rdf::Graph g = directmap::direct_map(db, directmap::Variant::Dm);
  Database rec = inverse::recover_database(g, db.base);
  return same_recovered_shape(db, rec);
}

bool query_preserved(const Database& db, const ExprPtr& q) {
  sparql::Solutions expected = ra2sparql::tr_result(relalg::eval(q, db));
  rdf::Graph g = directmap::direct_map(db, directmap::Variant::Dm);
  sparql::Solutions actual = sparql::eval_pattern(ra2sparql::translate(q, db), g);
  return expected == actual;
}

json solutions_json(const sparql::Solutions& sols) { return sparql::solutions_to_json(sols); }

Database subset_instance(const Database& db, Rng& rng, double keep_probability) {
  Database out = db;
  for (auto& [rel, rows] : out.instance) {
    std::vector<Tuple> kept;
    for (Tuple& t : rows)
      if (rng.chance(keep_probability)) kept.push_back(std::move(t));
    rows = std::move(kept);
  }
  return out;
}

// Keep only the tuples of `sub` whose value rows still occur in `super`;
// used to re-derive the smaller instance while minimizing the larger one.
Database intersect_instance(const Database& sub, const Database& super) {
  Database out = super;
  out.instance.clear();
  for (const Relation& rel : super.schema.relations) {
    auto sit = sub.instance.find(rel.name);
    auto bit = super.instance.find(rel.name);
    if (sit == sub.instance.end() || bit == super.instance.end()) continue;
    std::set<Row> big;
    for (const Tuple& t : bit->second) big.insert(t.values);
    std::vector<Tuple>& rows = out.instance[rel.name];
    for (const Tuple& t : sit->second)
      if (big.count(t.values)) rows.push_back(t);
  }
  return out;
}

// The smallest database on which the key+reference-checking variant is not
// monotone: a referencing row exists in both instances, the referenced row
// only in the larger one.
Database dangling_reference_witness() {
  json doc = {
      {"relations",
       {{{"name", "R1"}, {"attributes", {"A"}}, {"tuples", {{"x"}}}},
        {{"name", "R2"}, {"attributes", {"B"}}, {"tuples", json::array()}}}},
      {"constraints",
       {{"primary_keys", {{{"relation", "R2"}, {"attributes", {"B"}}}}},
        {"foreign_keys",
         {{{"relation", "R1"},
           {"attributes", {"A"}},
           {"ref_relation", "R2"},
           {"ref_attributes", {"B"}}}}}}}};
  return relmodel::load_database(doc);
}

Database with_referenced_row(const Database& db) {
  Database out = db;
  Tuple t;
  t.id = "id1";
  t.values["B"] = Value::of("x");
  out.instance["R2"].push_back(std::move(t));
  return out;
}

}  // namespace

PropertyReport check_information_preservation(const GeneratorParams& p, size_t trials,
                                              const Database* fixed_db) {
  PropertyReport rep;
  rep.property = "information-preservation";
  rep.variant = "dm";
  rep.trials = fixed_db ? 1 : trials;
  Rng rng(p.seed);

  for (size_t trial = 0; trial < rep.trials; ++trial) {
    GeneratorParams gp = p;
    gp.constraint_satisfying = true;
    Rng trial_rng = rng.fork();
    Database db = fixed_db ? *fixed_db : gen_random_database(trial_rng, gp);
    ++rep.coverage["variant-dm"];
    if (roundtrip_ok(db)) continue;

    Database small = minimize_database(db, [](const Database& cand) {
      return !cand.schema.relations.empty() && !roundtrip_ok(cand);
    });
    Database rec = inverse::recover_database(
        directmap::direct_map(small, directmap::Variant::Dm), small.base);
    rep.failures.push_back({"recovered database differs from the original",
                            relmodel::serialize_database(small), "",
                            instance_to_json(small), instance_to_json(rec)});
  }
  if (fixed_db) rep.details["input-satisfies-constraints"] = relmodel::satisfies(*fixed_db).holds;
  return rep;
}

PropertyReport check_query_preservation(const GeneratorParams& p, size_t max_depth,
                                        size_t trials, const Database* fixed_db) {
  PropertyReport rep;
  rep.property = "query-preservation";
  rep.variant = "dm";
  Rng rng(p.seed);

  // A fixed slate first: one query per translation case over a designed
  // database, so a default run provably exercises all of them.
  auto tuple_rows = [](std::vector<std::vector<json>> rows) {
    json out = json::array();
    for (auto& row : rows) out.push_back(json(row));
    return out;
  };
  json slate_doc = {
      {"relations",
       {{{"name", "S1"},
         {"attributes", {"K", "X"}},
         {"tuples", tuple_rows({{"k1", "v1"}, {"k2", nullptr}, {"k3", "v2"}})}},
        {{"name", "S2"},
         {"attributes", {"K", "Y"}},
         {"tuples", tuple_rows({{"k1", "v5"}, {"k9", nullptr}})}},
        {{"name", "T1"},
         {"attributes", {"K", "X"}},
         {"tuples", tuple_rows({{"k1", "v1"}, {"k4", nullptr}})}},
        {{"name", "M1"},
         {"attributes", {"P", "Q"}},
         {"tuples", tuple_rows({{"k1", "k1"}, {"k3", "k9"}})}}}},
      {"constraints",
       {{"primary_keys",
         {{{"relation", "S1"}, {"attributes", {"K"}}},
          {{"relation", "S2"}, {"attributes", {"K"}}},
          {{"relation", "M1"}, {"attributes", {"P", "Q"}}}}},
        {"foreign_keys",
         {{{"relation", "M1"},
           {"attributes", {"P"}},
           {"ref_relation", "S1"},
           {"ref_attributes", {"K"}}},
          {{"relation", "M1"},
           {"attributes", {"Q"}},
           {"ref_relation", "S2"},
           {"ref_attributes", {"K"}}}}}}}};
  Database slate_db = relmodel::load_database(slate_doc);
  if (!relmodel::satisfies(slate_db).holds)
    throw std::logic_error("designed coverage database violates its constraints");

  using relalg::base;
  using relalg::SelKind;
  std::vector<ExprPtr> slate = {
      base("S1"),
      base("M1"),
      relalg::join(base("S1"), relalg::nullrel("Z")),
      relalg::select({SelKind::Eq, "X", "v1"}, base("S1")),
      relalg::select({SelKind::Neq, "X", "v1"}, base("S1")),
      relalg::select({SelKind::IsNull, "X", ""}, base("S1")),
      relalg::select({SelKind::IsNotNull, "X", ""}, base("S1")),
      relalg::project({"K"}, base("S1")),
      relalg::rename("X", "W", base("S1")),
      relalg::join(base("S1"), base("S2")),
      relalg::join(base("S1"), base("M1")),
      relalg::set_union(base("S1"), base("T1")),
      relalg::difference(base("S1"), base("T1")),
      relalg::difference(relalg::project({"K"}, base("S1")),
                         relalg::project({"K"}, base("T1"))),
      relalg::desugar_left_outer_join(base("S1"), base("S2"), slate_db.schema),
  };

  auto run_trial = [&](const Database& db, const ExprPtr& q) {
    ++rep.coverage["variant-dm"];
    record_query_coverage(q, db, rep.coverage);
    if (query_preserved(db, q)) return;

    Database small = minimize_database(db, [&](const Database& cand) {
      return !cand.schema.relations.empty() && !query_preserved(cand, q);
    });
    sparql::Solutions expected = ra2sparql::tr_result(relalg::eval(q, small));
    sparql::Solutions actual = sparql::eval_pattern(
        ra2sparql::translate(q, small),
        directmap::direct_map(small, directmap::Variant::Dm));
    rep.failures.push_back({"compiled pattern and relational answer disagree",
                            relmodel::serialize_database(small), relalg::to_text(q),
                            solutions_json(expected), solutions_json(actual)});
  };

  if (fixed_db) {
    rep.trials = trials;
    for (size_t trial = 0; trial < trials; ++trial) {
      Rng trial_rng = rng.fork();
      run_trial(*fixed_db, gen_random_query(trial_rng, *fixed_db, 1 + trial_rng.below(max_depth)));
    }
    return rep;
  }

  rep.trials = trials;
  size_t trial = 0;
  for (const ExprPtr& q : slate) {
    if (trial++ >= trials) break;
    run_trial(slate_db, q);
  }
  if (trial >= slate.size())
    ++rep.coverage["query-louter-desugared"];  // the slate ends with one

  for (; trial < trials; ++trial) {
    GeneratorParams gp = p;
    gp.constraint_satisfying = true;
    Rng trial_rng = rng.fork();
    Database db = gen_random_database(trial_rng, gp);
    ExprPtr q = gen_random_query(trial_rng, db, 1 + trial_rng.below(max_depth));
    run_trial(db, q);
  }
  return rep;
}

PropertyReport check_monotonicity(const GeneratorParams& p, directmap::Variant variant,
                                  size_t trials, const Database* fixed_db) {
  PropertyReport rep;
  rep.property = "monotonicity";
  rep.variant = variant_name(variant);
  rep.trials = trials;
  Rng rng(p.seed);

  const bool expect_monotone = variant != directmap::Variant::DmPkFk;
  size_t witnesses = 0;

  auto contained = [&](const Database& small, const Database& big) {
    return rdf::graph_contained(directmap::direct_map(small, variant),
                                directmap::direct_map(big, variant));
  };

  for (size_t trial = 0; trial < trials; ++trial) {
    GeneratorParams gp = p;
    gp.constraint_satisfying = trial % 2 == 0;
    Rng trial_rng = rng.fork();
    Database big = fixed_db ? *fixed_db : gen_random_database(trial_rng, gp);
    Database small = subset_instance(big, trial_rng, 0.5);
    ++rep.coverage["variant-" + rep.variant];

    if (contained(small, big)) continue;
    if (!expect_monotone) {
      ++witnesses;
      continue;
    }

    Database small_big = minimize_database(big, [&](const Database& cand) {
      return !cand.schema.relations.empty() && !contained(intersect_instance(small, cand), cand);
    });
    Database small_small = intersect_instance(small, small_big);
    rep.failures.push_back({"graph of a sub-instance is not a sub-graph",
                            relmodel::serialize_database(small_big), "",
                            json{{"sub-instance", instance_to_json(small_small)}},
                            json{{"note", "triples of the sub-instance graph are missing from "
                                          "the super-instance graph"}}});
  }

  if (!expect_monotone) {
    // Deterministic witness regardless of the random search: the extra
    // violation triple for the dangling row disappears once the referenced
    // row is added.
    Database small = dangling_reference_witness();
    Database big = with_referenced_row(small);
    ++rep.coverage["variant-" + rep.variant];
    bool broke = !contained(small, big);
    if (broke) ++witnesses;
    rep.details["constructed-witness"] = {
        {"sub-database", relmodel::serialize_database(small)},
        {"super-database", relmodel::serialize_database(big)},
        {"containment-broken", broke}};
    rep.details["witnesses-found"] = witnesses;
    if (witnesses == 0)
      rep.failures.push_back({"expected non-monotone behaviour, found none",
                              relmodel::serialize_database(big), "",
                              json("some sub-instance graph not contained in its super-instance "
                                   "graph"),
                              json("all sampled pairs were contained")});
  }
  return rep;
}

PropertyReport check_semantics_preservation(const GeneratorParams& p, directmap::Variant variant,
                                            size_t trials, const Database* fixed_db) {
  PropertyReport rep;
  rep.property = "semantics-preservation";
  rep.variant = variant_name(variant);
  rep.trials = trials;
  Rng rng(p.seed);

  size_t satisfied_trials = 0, violating_trials = 0;

  for (size_t trial = 0; trial < trials; ++trial) {
    GeneratorParams gp = p;
    gp.constraint_satisfying = trial % 2 == 0;
    // The key-checking variant is only claimed to mirror key-only
    // constraint sets, so its trials use none of the reference constraints.
    if (variant == directmap::Variant::DmPk) gp.fk_density = 0.0;
    Rng trial_rng = rng.fork();
    Database db = fixed_db ? *fixed_db : gen_random_database(trial_rng, gp);
    ++rep.coverage["variant-" + rep.variant];

    // The key-checking variant only mirrors key satisfaction, so judge it
    // against the key part of the constraints.
    auto scoped_satisfies = [&](const Database& d) {
      if (variant != directmap::Variant::DmPk) return relmodel::satisfies(d).holds;
      Database keys_only = d;
      keys_only.constraints.foreign_keys.clear();
      return relmodel::satisfies(keys_only).holds;
    };

    const bool sat = scoped_satisfies(db);
    const bool cons = rdf::is_consistent(directmap::direct_map(db, variant));
    (sat ? satisfied_trials : violating_trials) += 1;

    const bool ok = variant == directmap::Variant::Dm ? cons : cons == sat;
    if (ok) continue;

    auto fails = [&](const Database& cand) {
      if (cand.schema.relations.empty()) return false;
      const bool cs = scoped_satisfies(cand);
      const bool cc = rdf::is_consistent(directmap::direct_map(cand, variant));
      return variant == directmap::Variant::Dm ? !cc : cc != cs;
    };
    Database small = minimize_database(db, fails);
    const bool ssat = scoped_satisfies(small);
    const bool scons = rdf::is_consistent(directmap::direct_map(small, variant));
    rep.failures.push_back(
        {variant == directmap::Variant::Dm
             ? "plain-variant graph is inconsistent"
             : "graph consistency disagrees with constraint satisfaction",
         relmodel::serialize_database(small), "",
         json{{"satisfies", ssat},
              {"expected-consistent", variant == directmap::Variant::Dm ? true : ssat}},
         json{{"consistent", scons}}});
  }

  rep.details["satisfied-trials"] = satisfied_trials;
  rep.details["violating-trials"] = violating_trials;

  if (variant == directmap::Variant::DmPk) {
    // Documented gap: the key-checking variant never flags dangling
    // references, so such databases map to consistent graphs even though
    // they violate their constraints.
    Database gap = dangling_reference_witness();
    rep.details["dangling-reference-gap"] = {
        {"database", relmodel::serialize_database(gap)},
        {"satisfies", relmodel::satisfies(gap).holds},
        {"consistent", rdf::is_consistent(directmap::direct_map(gap, variant))}};
  }
  return rep;
}

}  // namespace rdb2owl::propcheck
