#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rdb2owl/relmodel.hpp"

namespace rdb2owl::relalg {

struct IllFormed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class SelKind { Eq, Neq, IsNull, IsNotNull };

// Selection condition: attribute (=|!=) constant, or (not-)NULL test.
struct SelCondition {
  SelKind kind;
  std::string attr;
  std::string constant;  // only for Eq / Neq
};

struct BaseRelation {
  std::string name;
};
// Single-attribute relation holding exactly one all-NULL tuple.
struct NullRel {
  std::string attr;
};
struct Select {
  SelCondition cond;
  ExprPtr child;
};
struct Project {
  std::vector<std::string> attrs;  // kept sorted and duplicate-free
  ExprPtr child;
};
struct Rename {
  std::string from, to;
  ExprPtr child;
};
struct Join {
  ExprPtr left, right;
};
struct Union {
  ExprPtr left, right;
};
struct Difference {
  ExprPtr left, right;
};

struct Expr {
  std::variant<BaseRelation, NullRel, Select, Project, Rename, Join, Union, Difference> node;
};

ExprPtr base(std::string name);
ExprPtr nullrel(std::string attr);
ExprPtr select(SelCondition cond, ExprPtr child);
ExprPtr project(std::vector<std::string> attrs, ExprPtr child);
ExprPtr rename(std::string from, std::string to, ExprPtr child);
ExprPtr join(ExprPtr l, ExprPtr r);
ExprPtr set_union(ExprPtr l, ExprPtr r);
ExprPtr difference(ExprPtr l, ExprPtr r);

// Attribute set of a well-formed expression; raises IllFormed (naming the
// violated arity/containment rule) otherwise.
std::set<std::string> attributes(const ExprPtr& e, const relmodel::Schema& schema);

// Evaluation result: a set of rows over a fixed attribute set.
struct ResultSet {
  std::set<std::string> attrs;
  std::set<relmodel::Row> rows;

  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

// Evaluate under the NULL-aware semantics: equalities and joins never match
// NULL; union/difference compare whole rows with NULL equal to NULL.
ResultSet eval(const ExprPtr& e, const relmodel::Database& db);

// Rewrite lhs LEFT OUTER JOIN rhs into the core algebra. Requires at least
// one shared attribute. Unmatched lhs rows are padded with NULLs on the
// rhs-only attributes.
ExprPtr desugar_left_outer_join(const ExprPtr& lhs, const ExprPtr& rhs,
                                const relmodel::Schema& schema);
// Symmetric variants built from the same rewrite.
ExprPtr desugar_right_outer_join(const ExprPtr& lhs, const ExprPtr& rhs,
                                 const relmodel::Schema& schema);
ExprPtr desugar_full_outer_join(const ExprPtr& lhs, const ExprPtr& rhs,
                                const relmodel::Schema& schema);

// Textual form, e.g. select(NAME=Juan, STUDENT), project({SID}, STUDENT),
// rename(SID->ID, STUDENT), join(a, b), union(a, b), diff(a, b),
// louter(a, b), nullrel(A), isnull(A)/isnotnull(A) selection conditions.
// Outer joins are expanded at parse time; the AST has no outer-join node.
ExprPtr parse_query(const std::string& text, const relmodel::Schema& schema);

// Render an expression in the textual form accepted by parse_query.
std::string to_text(const ExprPtr& e);

}  // namespace rdb2owl::relalg
