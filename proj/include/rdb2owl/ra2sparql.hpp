#pragma once

#include <stdexcept>
#include <string>

#include "rdb2owl/relalg.hpp"
#include "rdb2owl/relmodel.hpp"
#include "rdb2owl/sparql.hpp"

namespace rdb2owl::ra2sparql {

struct TranslateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TranslateOptions {
  // The difference translation expands into 2^n united patterns over the n
  // shared attributes; refuse anything larger than this.
  size_t difference_arity_cap = 12;
};

// Convert a tuple into a solution mapping: every non-NULL cell t.A becomes
// a binding ?A -> literal, NULL cells stay unbound.
sparql::SolutionMapping tr_tuple(const relmodel::Row& row);
sparql::Solutions tr_result(const relalg::ResultSet& rs);

// Compile a well-formed algebra expression into a graph pattern that,
// evaluated over direct_map of any instance of the schema, returns exactly
// tr_result of the relational answer. The output always passes
// is_non_parametric; generated helper variables live in the reserved "__"
// namespace. Ill-formed expressions raise relalg::IllFormed; a difference
// whose attribute set exceeds the cap raises TranslateError.
sparql::PatternPtr translate(const relalg::ExprPtr& q, const relmodel::Schema& schema,
                             const relmodel::Constraints& cs, const std::string& base,
                             const TranslateOptions& opts = {});
sparql::PatternPtr translate(const relalg::ExprPtr& q, const relmodel::Database& db,
                             const TranslateOptions& opts = {});

}  // namespace rdb2owl::ra2sparql
