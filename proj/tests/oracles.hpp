#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is written in a deliberately naive list-and-loop style and
// shares no evaluation logic with src/; only the AST and value types are
// reused. Keep these frozen: tests compare the optimized implementations
// against them, so fixes belong in src/, not here.

#include <map>
#include <string>
#include <vector>

#include "rdb2owl/rdf.hpp"
#include "rdb2owl/relalg.hpp"
#include "rdb2owl/relmodel.hpp"
#include "rdb2owl/sparql.hpp"

namespace rdb2owl::oracle {

// A query answer as a plain list of rows; rows may repeat and appear in any
// order, the comparison helpers treat them as a set.
struct Table {
  std::vector<std::string> attrs;  // sorted, duplicate-free
  std::vector<std::map<std::string, relmodel::Value>> rows;
};

// Nested-loop evaluation of a relational algebra expression.
Table eval_naive(const relalg::ExprPtr& e, const relmodel::Database& db);

// Nested-loop left outer join over two already-evaluated operands: every
// left row either merges with each matching right row (all shared attributes
// non-NULL and equal) or, if nothing matches, is padded with NULLs.
Table left_outer_join_naive(const Table& left, const Table& right);

Table to_table(const relalg::ResultSet& rs);
bool same_table(const Table& a, const Table& b);

// Brute-force integrity check: each key has no NULL and no duplicate key
// values; each reference's target attribute list satisfies the key condition
// and every fully non-NULL source row has a matching target row.
bool satisfies_naive(const relmodel::Database& db);

// List-based evaluation of a graph pattern (no parametricity screening; the
// caller only feeds patterns the main evaluator also accepts).
std::vector<sparql::SolutionMapping> sparql_naive(const sparql::PatternPtr& p,
                                                  const rdf::Graph& g);
bool same_solutions(const std::vector<sparql::SolutionMapping>& a, const sparql::Solutions& b);

}  // namespace rdb2owl::oracle
