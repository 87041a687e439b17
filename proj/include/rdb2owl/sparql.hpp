#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rdb2owl/rdf.hpp"

namespace rdb2owl::sparql {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A variable, stored with its '?' prefix (e.g. "?SID").
struct Var {
  std::string name;

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

// Triple-pattern component: an RDF term (IRI or literal) or a variable.
using TermOrVar = std::variant<rdf::Term, Var>;

struct Condition;
using CondPtr = std::shared_ptr<const Condition>;

struct CondBound {
  Var var;
};
struct CondEqConst {
  Var var;
  rdf::Term constant;  // IRI or literal
};
struct CondEqVar {
  Var left, right;
};
struct CondNot {
  CondPtr arg;
};
struct CondAnd {
  CondPtr left, right;
};
struct CondOr {
  CondPtr left, right;
};

struct Condition {
  std::variant<CondBound, CondEqConst, CondEqVar, CondNot, CondAnd, CondOr> node;
};

CondPtr bound(Var v);
CondPtr eq_const(Var v, rdf::Term c);
CondPtr eq_var(Var a, Var b);
CondPtr cond_not(CondPtr c);
CondPtr cond_and(CondPtr l, CondPtr r);
CondPtr cond_or(CondPtr l, CondPtr r);

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Empty {};
struct TriplePattern {
  TermOrVar subject;    // IRI, literal, or variable
  TermOrVar predicate;  // IRI or variable
  TermOrVar object;     // IRI, literal, or variable
};
struct And {
  PatternPtr left, right;
};
struct Opt {
  PatternPtr left, right;
};
struct UnionP {
  PatternPtr left, right;
};
struct Minus {
  PatternPtr left, right;
};
struct Filter {
  PatternPtr child;
  CondPtr cond;
};
// SELECT {?A1 AS ?B1, ..., ?Am AS ?Bm, ?C1, ..., ?Cn} (P). The listed
// variables must be pairwise distinct and no ?Bi may occur in P.
struct SelectP {
  std::vector<std::pair<Var, Var>> renames;  // (?Ai, ?Bi)
  std::vector<Var> keep;                     // ?Cj
  PatternPtr child;
};

struct Pattern {
  std::variant<Empty, TriplePattern, And, Opt, UnionP, Minus, Filter, SelectP> node;
};

PatternPtr empty_pattern();
PatternPtr triple_pattern(TermOrVar s, TermOrVar p, TermOrVar o);
PatternPtr p_and(PatternPtr l, PatternPtr r);
PatternPtr p_opt(PatternPtr l, PatternPtr r);
PatternPtr p_union(PatternPtr l, PatternPtr r);
PatternPtr p_minus(PatternPtr l, PatternPtr r);
PatternPtr p_filter(PatternPtr child, CondPtr cond);
PatternPtr p_select(std::vector<std::pair<Var, Var>> renames, std::vector<Var> keep,
                    PatternPtr child);

// A solution mapping: a partial assignment of variables to RDF terms.
using SolutionMapping = std::map<std::string, rdf::Term>;
using Solutions = std::set<SolutionMapping>;

// Variables occurring anywhere in the pattern (triple patterns, filter
// conditions, select lists).
std::set<std::string> pattern_vars(const PatternPtr& p);

// Rebuild the pattern with every occurrence of each key variable replaced by
// its mapped variable. The replacement is purely textual, so callers must
// ensure the target names do not already occur in the pattern; the input
// pattern is left untouched.
PatternPtr substitute_variables(const PatternPtr& p,
                                const std::map<std::string, std::string>& renaming);

// Structural validity: component kinds of triple patterns, select-list
// distinctness, ?Bi fresh for the select operand. Throws EvalError.
void validate_pattern(const PatternPtr& p);

// True when no variable hidden by a SELECT (in scope of its operand but not
// listed) occurs anywhere outside that SELECT occurrence.
bool is_non_parametric(const PatternPtr& p);

bool satisfies_condition(const SolutionMapping& mu, const CondPtr& cond);

// Evaluate a non-parametric pattern over a graph; unbound variables in
// filter conditions make the condition false, never an error.
Solutions eval_pattern(const PatternPtr& p, const rdf::Graph& g);

bool mappings_compatible(const SolutionMapping& a, const SolutionMapping& b);

// SPARQL 1.1 surface syntax with explicit braces. serialize_pattern yields a
// group graph pattern; serialize_query yields a complete SELECT query.
std::string serialize_pattern(const PatternPtr& p);
std::string serialize_query(const PatternPtr& p);

nlohmann::json pattern_to_json(const PatternPtr& p);
nlohmann::json solutions_to_json(const Solutions& sols);

}  // namespace rdb2owl::sparql
