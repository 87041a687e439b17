#include "rdb2owl/directmap.hpp"

#include <algorithm>

namespace rdb2owl::directmap {

using relmodel::ForeignKey;
using relmodel::PrimaryKey;
using relmodel::Tuple;
using relmodel::Value;

const BinaryRelation* Ontology::binary_relation_of(const std::string& rel) const {
  for (const auto& br : binary_relations)
    if (br.rel == rel) return &br;
  return nullptr;
}

namespace {

// Single-attribute foreign keys leaving `rel` through attribute `attr`.
std::vector<const ForeignKey*> unary_fks_from(const relmodel::Constraints& cs,
                                              const std::string& rel, const std::string& attr) {
  std::vector<const ForeignKey*> out;
  for (const auto& fk : cs.foreign_keys)
    if (fk.relation == rel && fk.attributes.size() == 1 && fk.attributes[0] == attr)
      out.push_back(&fk);
  return out;
}

bool two_attr_fk_over(const relmodel::Constraints& cs, const std::string& rel,
                      const std::string& a, const std::string& b) {
  for (const auto& fk : cs.foreign_keys)
    if (fk.relation == rel && fk.attributes.size() == 2 &&
        ((fk.attributes[0] == a && fk.attributes[1] == b) ||
         (fk.attributes[0] == b && fk.attributes[1] == a)))
      return true;
  return false;
}

bool has_incoming_fk(const relmodel::Constraints& cs, const std::string& rel) {
  for (const auto& fk : cs.foreign_keys)
    if (fk.ref_relation == rel) return true;
  return false;
}

}  // namespace

Ontology extract_ontology(const relmodel::Schema& schema, const relmodel::Constraints& cs) {
  Ontology onto;
  for (const relmodel::Relation& rel : schema.relations) {
    const PrimaryKey* pk = cs.primary_key_of(rel.name);
    if (!pk || pk->attributes.size() != 2 || rel.attributes.size() != 2) continue;
    const std::string& a = pk->attributes[0];
    const std::string& b = pk->attributes[1];
    auto fks_a = unary_fks_from(cs, rel.name, a);
    auto fks_b = unary_fks_from(cs, rel.name, b);
    // Each key attribute must leave through exactly one unary FK, to a
    // relation other than R itself; no composite FK over (A,B); no FK into R.
    if (fks_a.size() != 1 || fks_b.size() != 1) continue;
    if (fks_a[0]->ref_relation == rel.name || fks_b[0]->ref_relation == rel.name) continue;
    if (two_attr_fk_over(cs, rel.name, a, b)) continue;
    if (has_incoming_fk(cs, rel.name)) continue;
    onto.binary_relations.push_back({rel.name, a, b, fks_a[0]->ref_relation,
                                     fks_a[0]->ref_attributes[0], fks_b[0]->ref_relation,
                                     fks_b[0]->ref_attributes[0]});
  }
  for (const relmodel::Relation& rel : schema.relations)
    if (!onto.binary_relation_of(rel.name)) onto.classes.insert(rel.name);

  for (const BinaryRelation& br : onto.binary_relations)
    onto.object_properties.push_back({PropertyOrigin::FromBinRel,
                                      br.rel,
                                      {br.attr_a, br.attr_b},
                                      {br.ref_c, br.ref_d},
                                      br.target_s,
                                      br.target_t});
  for (const ForeignKey& fk : cs.foreign_keys) {
    if (onto.binary_relation_of(fk.relation)) continue;
    onto.object_properties.push_back({PropertyOrigin::FromFk, fk.relation, fk.attributes,
                                      fk.ref_attributes, fk.relation, fk.ref_relation});
  }
  return onto;
}

namespace {

void check_name(const std::string& s) {
  if (!relmodel::valid_name(s))
    throw MapError("IRI component \"" + s + "\" is empty or contains a reserved character");
}

void check_value(const std::string& s) {
  if (!relmodel::valid_iri_value(s))
    throw MapError("IRI value component \"" + s + "\" contains a reserved character");
}

}  // namespace

std::string class_iri(const std::string& base, const std::string& rel) {
  check_name(rel);
  return base + rel;
}

std::string data_property_iri(const std::string& base, const std::string& rel,
                              const std::string& attr) {
  check_name(rel);
  check_name(attr);
  return base + rel + "#" + attr;
}

std::string binrel_property_iri(const std::string& base, const BinaryRelation& br) {
  for (const std::string* s : {&br.rel, &br.attr_a, &br.attr_b, &br.ref_c, &br.ref_d})
    check_name(*s);
  return base + br.rel + "#" + br.attr_a + "," + br.attr_b + "," + br.ref_c + "," + br.ref_d;
}

std::string fk_property_iri(const std::string& base, const std::string& source,
                            const std::string& target, const std::vector<std::string>& attrs,
                            const std::vector<std::string>& refs) {
  if (attrs.empty() || attrs.size() != refs.size())
    throw MapError("foreign-key property needs matching nonempty attribute lists");
  check_name(source);
  check_name(target);
  std::string iri = base + source + "," + target + "#";
  bool first = true;
  for (const auto& list : {attrs, refs}) {
    for (const std::string& a : list) {
      check_name(a);
      if (!first) iri += ",";
      iri += a;
      first = false;
    }
  }
  return iri;
}

std::string row_iri(const std::string& base, const std::string& rel,
                    const std::vector<std::string>& pk_attrs,
                    const std::vector<std::string>& pk_values) {
  if (pk_attrs.empty() || pk_attrs.size() != pk_values.size())
    throw MapError("row IRI needs matching nonempty attribute/value lists");
  check_name(rel);
  std::string iri = base + rel + "#";
  for (size_t i = 0; i < pk_attrs.size(); ++i) {
    check_name(pk_attrs[i]);
    check_value(pk_values[i]);
    if (i) iri += ",";
    iri += pk_attrs[i] + "=" + pk_values[i];
  }
  return iri;
}

std::string generate_iri(IriKind kind, const std::vector<std::string>& components,
                         const std::string& base) {
  switch (kind) {
    case IriKind::Class:
      if (components.size() != 1) throw MapError("class IRI takes one component");
      return class_iri(base, components[0]);
    case IriKind::DataProperty:
      if (components.size() != 2) throw MapError("data-property IRI takes two components");
      return data_property_iri(base, components[0], components[1]);
    case IriKind::BinRelProperty: {
      if (components.size() != 5)
        throw MapError("binary-relation IRI takes components R, A, B, C, D");
      BinaryRelation br{components[0], components[1], components[2],
                        "",            components[3], "",
                        components[4]};
      return binrel_property_iri(base, br);
    }
    case IriKind::FkProperty: {
      if (components.size() < 4 || components.size() % 2 != 0)
        throw MapError("foreign-key IRI takes components S, T, X1..Xn, Y1..Yn");
      size_t n = (components.size() - 2) / 2;
      std::vector<std::string> attrs(components.begin() + 2, components.begin() + 2 + n);
      std::vector<std::string> refs(components.begin() + 2 + n, components.end());
      return fk_property_iri(base, components[0], components[1], attrs, refs);
    }
    case IriKind::Row: {
      if (components.size() < 3 || components.size() % 2 != 1)
        throw MapError("row IRI takes components R, A1, V1, ..., An, Vn");
      std::vector<std::string> attrs, values;
      for (size_t i = 1; i < components.size(); i += 2) {
        attrs.push_back(components[i]);
        values.push_back(components[i + 1]);
      }
      return row_iri(base, components[0], attrs, values);
    }
  }
  throw MapError("unknown IRI kind");
}

rdf::Term tuple_identifier(const Tuple& t, const std::string& rel,
                           const relmodel::Constraints& cs, const std::string& base) {
  if (const PrimaryKey* pk = cs.primary_key_of(rel)) {
    bool all_present = true;
    for (const std::string& a : pk->attributes) {
      auto it = t.values.find(a);
      if (it == t.values.end() || it->second.is_null()) {
        all_present = false;
        break;
      }
    }
    if (all_present) {
      std::vector<std::string> values;
      for (const std::string& a : pk->attributes) values.push_back(t.values.at(a).text());
      return rdf::Term::iri(row_iri(base, rel, pk->attributes, values));
    }
  }
  return rdf::Term::blank(rel + t.id);
}

std::string violation_iri(const std::string& base) { return base + "violation"; }

namespace {

const std::vector<Tuple>& rows_of(const relmodel::Database& db, const std::string& rel) {
  static const std::vector<Tuple> kEmpty;
  auto it = db.instance.find(rel);
  return it == db.instance.end() ? kEmpty : it->second;
}

struct Emitter {
  MapResult& out;
  void operator()(rdf::Triple t, const std::string& rule) {
    out.trace[t].insert(rule);
    out.graph.insert(std::move(t));
  }
};

}  // namespace

MapResult direct_map_traced(const relmodel::Database& db, Variant variant) {
  MapResult out;
  Emitter emit{out};
  const std::string& base = db.base;
  const Ontology onto = extract_ontology(db.schema, db.constraints);

  const rdf::Term rdf_type = rdf::Term::iri(rdf::vocab::rdf_type);
  const rdf::Term rdfs_domain = rdf::Term::iri(rdf::vocab::rdfs_domain);
  const rdf::Term rdfs_range = rdf::Term::iri(rdf::vocab::rdfs_range);

  // Schema triples: class declarations.
  for (const std::string& cls : onto.classes)
    emit({rdf::Term::iri(class_iri(base, cls)), rdf_type, rdf::Term::iri(rdf::vocab::owl_class)},
         "class-decl");

  // Schema triples: object-property declarations, domains, ranges.
  for (const ObjectProperty& op : onto.object_properties) {
    std::string iri = op.origin == PropertyOrigin::FromBinRel
                          ? binrel_property_iri(base, *onto.binary_relation_of(op.rel))
                          : fk_property_iri(base, op.domain_rel, op.range_rel, op.attrs, op.refs);
    rdf::Term p = rdf::Term::iri(iri);
    emit({p, rdf_type, rdf::Term::iri(rdf::vocab::owl_object_property)}, "objprop-decl");
    emit({p, rdfs_domain, rdf::Term::iri(class_iri(base, op.domain_rel))}, "objprop-domain");
    emit({p, rdfs_range, rdf::Term::iri(class_iri(base, op.range_rel))}, "objprop-range");
  }

  // Schema triples: datatype-property declarations and domains.
  for (const relmodel::Relation& rel : db.schema.relations) {
    if (!onto.is_class(rel.name)) continue;
    for (const std::string& attr : rel.attributes) {
      rdf::Term p = rdf::Term::iri(data_property_iri(base, rel.name, attr));
      emit({p, rdf_type, rdf::Term::iri(rdf::vocab::owl_datatype_property)}, "dtp-decl");
      emit({p, rdfs_domain, rdf::Term::iri(class_iri(base, rel.name))}, "dtp-domain");
    }
  }

  // Table triples: every row of a class is typed with its class IRI.
  for (const std::string& cls : onto.classes) {
    rdf::Term cls_term = rdf::Term::iri(class_iri(base, cls));
    for (const Tuple& t : rows_of(db, cls))
      emit({tuple_identifier(t, cls, db.constraints, base), rdf_type, cls_term}, "table");
  }

  // Reference triples from binary relations: bridge rows pair up the rows
  // they reference; NULL bridge values reference nothing.
  for (const BinaryRelation& br : onto.binary_relations) {
    rdf::Term p = rdf::Term::iri(binrel_property_iri(base, br));
    for (const Tuple& t1 : rows_of(db, br.rel)) {
      const Value& va = t1.values.at(br.attr_a);
      const Value& vb = t1.values.at(br.attr_b);
      if (va.is_null() || vb.is_null()) continue;
      for (const Tuple& t2 : rows_of(db, br.target_s)) {
        if (t2.values.at(br.ref_c).is_null() || !(t2.values.at(br.ref_c) == va)) continue;
        for (const Tuple& t3 : rows_of(db, br.target_t)) {
          if (t3.values.at(br.ref_d).is_null() || !(t3.values.at(br.ref_d) == vb)) continue;
          emit({tuple_identifier(t2, br.target_s, db.constraints, base), p,
                tuple_identifier(t3, br.target_t, db.constraints, base)},
               "ref-binrel");
        }
      }
    }
  }

  // Reference triples from foreign keys: rows with fully non-NULL FK values
  // point at every matching target row.
  for (const ObjectProperty& op : onto.object_properties) {
    if (op.origin != PropertyOrigin::FromFk) continue;
    rdf::Term p =
        rdf::Term::iri(fk_property_iri(base, op.domain_rel, op.range_rel, op.attrs, op.refs));
    for (const Tuple& t1 : rows_of(db, op.domain_rel)) {
      bool all_present = true;
      for (const std::string& a : op.attrs)
        if (t1.values.at(a).is_null()) {
          all_present = false;
          break;
        }
      if (!all_present) continue;
      for (const Tuple& t2 : rows_of(db, op.range_rel)) {
        bool match = true;
        for (size_t i = 0; i < op.attrs.size(); ++i)
          if (!(t1.values.at(op.attrs[i]) == t2.values.at(op.refs[i]))) {
            match = false;
            break;
          }
        if (!match) continue;
        emit({tuple_identifier(t1, op.domain_rel, db.constraints, base), p,
              tuple_identifier(t2, op.range_rel, db.constraints, base)},
             "ref-fk");
      }
    }
  }

  // Literal triples: one per non-NULL cell of a class row.
  for (const relmodel::Relation& rel : db.schema.relations) {
    if (!onto.is_class(rel.name)) continue;
    for (const std::string& attr : rel.attributes) {
      rdf::Term p = rdf::Term::iri(data_property_iri(base, rel.name, attr));
      for (const Tuple& t : rows_of(db, rel.name)) {
        const Value& v = t.values.at(attr);
        if (v.is_null()) continue;
        emit({tuple_identifier(t, rel.name, db.constraints, base), p,
              rdf::Term::literal(v.text())},
             "literal");
      }
    }
  }

  if (variant == Variant::Dm) return out;

  const rdf::Term viol = rdf::Term::iri(violation_iri(base));
  const rdf::Triple viol_triple{viol, rdf::Term::iri(rdf::vocab::owl_different_from), viol};

  // Key violations: a NULL in a key column, or two rows agreeing on the key.
  for (const PrimaryKey& pk : db.constraints.primary_keys) {
    const auto& rows = rows_of(db, pk.relation);
    for (const Tuple& t : rows)
      for (const std::string& a : pk.attributes)
        if (t.values.at(a).is_null()) emit(viol_triple, "pk-null");
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = i + 1; j < rows.size(); ++j) {
        bool agree = true;
        for (const std::string& a : pk.attributes)
          if (!(rows[i].values.at(a) == rows[j].values.at(a))) {
            agree = false;
            break;
          }
        if (agree) emit(viol_triple, "pk-duplicate");
      }
  }

  if (variant == Variant::DmPkFk) {
    // Dangling references: fully non-NULL FK values with no matching row.
    for (const ForeignKey& fk : db.constraints.foreign_keys) {
      for (const Tuple& t : rows_of(db, fk.relation)) {
        bool all_present = true;
        for (const std::string& a : fk.attributes)
          if (t.values.at(a).is_null()) {
            all_present = false;
            break;
          }
        if (!all_present) continue;
        bool matched = false;
        for (const Tuple& s : rows_of(db, fk.ref_relation)) {
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
        if (!matched) emit(viol_triple, "fk-violation");
      }
    }
  }
  return out;
}

rdf::Graph direct_map(const relmodel::Database& db, Variant variant) {
  return direct_map_traced(db, variant).graph;
}

}  // namespace rdb2owl::directmap
