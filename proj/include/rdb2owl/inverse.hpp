#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rdb2owl/rdf.hpp"
#include "rdb2owl/relmodel.hpp"
#include "rdb2owl/sparql.hpp"

namespace rdb2owl::inverse {

struct RecoverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inverse of the tuple-to-mapping conversion: bound ?A becomes t.A, an
// unbound attribute becomes NULL.
relmodel::Row tr_inverse(const sparql::SolutionMapping& mu,
                         const std::vector<std::string>& attrs);

// Reconstruct a relational database from a graph produced by direct_map
// (any variant) under the given base IRI.
//
//   1. owl:Class declarations name the non-bridge relations.
//   2. Datatype-property declarations plus their domains give each of those
//      relations its attributes (stored sorted; declaration order is not
//      recoverable).
//   3. Per relation, a SELECT over a nested-OPTIONAL chain reads the rows
//      back; missing literal triples surface as unbound variables.
//   4. Object properties whose IRI has a single path element before '#'
//      encode a bridge relation; the four comma-separated names after '#'
//      are its two attributes and the referenced attributes, and a
//      three-triple join query reads its rows back through the literals of
//      the referenced relations.
//   5. Each solution mapping becomes a tuple via tr_inverse.
//
// Constraints are not reconstructed; the result carries an empty constraint
// set. The extra self-owl:differentFrom triple emitted by the key-checking
// variants matches no recovery pattern and is ignored. Graphs that are not
// recognizable as a mapping image (missing domain/range triples, unparsable
// property IRIs, IRIs outside the base) raise RecoverError.
relmodel::Database recover_database(const rdf::Graph& g, const std::string& base);

}  // namespace rdb2owl::inverse
