#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdb2owl/rdf.hpp"
#include "rdb2owl/relmodel.hpp"

namespace rdb2owl::directmap {

struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// R is a many-to-many bridge: its two attributes (A, B) form its key and
// each is a single-attribute foreign key into S (attribute C) resp. T
// (attribute D).
struct BinaryRelation {
  std::string rel;       // R
  std::string attr_a;    // A
  std::string attr_b;    // B
  std::string target_s;  // S
  std::string ref_c;     // C
  std::string target_t;  // T
  std::string ref_d;     // D

  friend bool operator==(const BinaryRelation&, const BinaryRelation&) = default;
};

enum class PropertyOrigin { FromBinRel, FromFk };

struct ObjectProperty {
  PropertyOrigin origin;
  std::string rel;                 // binary-relation name, or the FK's source relation
  std::vector<std::string> attrs;  // (A, B) for a binary relation; FK attributes otherwise
  std::vector<std::string> refs;   // (C, D) for a binary relation; referenced attributes otherwise
  std::string domain_rel;          // S
  std::string range_rel;           // T

  friend bool operator==(const ObjectProperty&, const ObjectProperty&) = default;
};

struct Ontology {
  std::set<std::string> classes;
  std::vector<BinaryRelation> binary_relations;
  std::vector<ObjectProperty> object_properties;  // both origins

  bool is_class(const std::string& rel) const { return classes.count(rel) > 0; }
  const BinaryRelation* binary_relation_of(const std::string& rel) const;
};

// Classify relations as classes or binary relations and derive object
// properties (one per binary relation, one per FK whose source is a class)
// and datatype properties (every attribute of a class).
Ontology extract_ontology(const relmodel::Schema& schema, const relmodel::Constraints& cs);

enum class IriKind { Class, DataProperty, BinRelProperty, FkProperty, Row };

// IRI templates over a common base:
//   class:    base R             data property: base R "#" A
//   binrel:   base R "#" A "," B "," C "," D
//   fk:       base S "," T "#" X1 "," ... "," Xn "," Y1 "," ... "," Yn
//   row:      base R "#" A1 "=" V1 "," ... "," An "=" Vn
std::string class_iri(const std::string& base, const std::string& rel);
std::string data_property_iri(const std::string& base, const std::string& rel,
                              const std::string& attr);
std::string binrel_property_iri(const std::string& base, const BinaryRelation& br);
std::string fk_property_iri(const std::string& base, const std::string& source,
                            const std::string& target, const std::vector<std::string>& attrs,
                            const std::vector<std::string>& refs);
std::string row_iri(const std::string& base, const std::string& rel,
                    const std::vector<std::string>& pk_attrs,
                    const std::vector<std::string>& pk_values);

// Generic entry point; `components` are the template arguments in the order
// listed above (for Row: R, A1, V1, A2, V2, ...). Raises MapError when a
// component contains a reserved character.
std::string generate_iri(IriKind kind, const std::vector<std::string>& components,
                         const std::string& base);

// Identifier of a tuple: the row IRI when the relation has a declared
// primary key and the tuple holds no NULL in it, a blank node labeled
// <relation><tuple-id> otherwise. (The mapping only asks for identifiers of
// class rows; binary-relation rows are bridged, never identified.)
rdf::Term tuple_identifier(const relmodel::Tuple& t, const std::string& rel,
                           const relmodel::Constraints& cs, const std::string& base);

enum class Variant { Dm, DmPk, DmPkFk };

// Trace: for each emitted triple, the names of the rules that produced it.
using Trace = std::map<rdf::Triple, std::set<std::string>>;

struct MapResult {
  rdf::Graph graph;
  Trace trace;
};

// The direct mapping. Dm emits schema, table, reference, and literal
// triples. DmPk adds one self-owl:differentFrom triple when a declared key
// is violated (duplicate or NULL); DmPkFk also adds it when a fully
// non-NULL FK source row has no matching target row.
rdf::Graph direct_map(const relmodel::Database& db, Variant variant = Variant::Dm);
MapResult direct_map_traced(const relmodel::Database& db, Variant variant = Variant::Dm);

// The IRI used as both subject and object of the violation triple.
std::string violation_iri(const std::string& base);

}  // namespace rdb2owl::directmap
