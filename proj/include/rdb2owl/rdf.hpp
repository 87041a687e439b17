#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdb2owl::rdf {

// Well-known vocabulary IRIs used by the mapping.
namespace vocab {
inline const std::string rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline const std::string rdfs_domain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline const std::string rdfs_range = "http://www.w3.org/2000/01/rdf-schema#range";
inline const std::string owl_class = "http://www.w3.org/2002/07/owl#Class";
inline const std::string owl_object_property = "http://www.w3.org/2002/07/owl#ObjectProperty";
inline const std::string owl_datatype_property = "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline const std::string owl_different_from = "http://www.w3.org/2002/07/owl#differentFrom";
}  // namespace vocab

enum class TermKind { Iri, BlankNode, Literal };

// A single RDF term. Literals are plain (no datatype/language tags);
// blank nodes carry an explicit label.
class Term {
 public:
  Term() : kind_(TermKind::Iri) {}
  static Term iri(std::string value) { return Term(TermKind::Iri, std::move(value)); }
  static Term blank(std::string label) { return Term(TermKind::BlankNode, std::move(label)); }
  static Term literal(std::string value) { return Term(TermKind::Literal, std::move(value)); }

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::Iri; }
  bool is_blank() const { return kind_ == TermKind::BlankNode; }
  bool is_literal() const { return kind_ == TermKind::Literal; }

  // IRI text, blank-node label, or literal value depending on kind.
  const std::string& text() const { return text_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string text) : kind_(kind), text_(std::move(text)) {}
  TermKind kind_;
  std::string text_;
};

struct Triple {
  Term subject;    // IRI or blank node
  Term predicate;  // IRI
  Term object;     // IRI, blank node, or literal

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

using Graph = std::set<Triple>;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A graph is inconsistent exactly when it asserts that some node is
// owl:differentFrom itself.
bool is_consistent(const Graph& g);

// True when every triple of `sub` occurs in `super`.
bool graph_contained(const Graph& sub, const Graph& super);

// Render a single term in N-Triples syntax (<iri>, _:label, "literal").
std::string term_to_ntriples(const Term& t);

// Deterministic N-Triples serialization: one triple per line, sorted by
// (subject, predicate, object) rendered form, trailing newline per line.
std::string serialize_ntriples(const Graph& g);

// Parse the subset of N-Triples emitted by serialize_ntriples. Blank lines
// are permitted; anything else malformed raises ParseError with a line number.
Graph parse_ntriples(const std::string& text);

}  // namespace rdb2owl::rdf
