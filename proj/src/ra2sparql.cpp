#include "rdb2owl/ra2sparql.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "rdb2owl/directmap.hpp"

namespace rdb2owl::ra2sparql {

namespace {

using rdf::Term;
using relalg::Expr;
using relalg::ExprPtr;
using relmodel::Constraints;
using relmodel::Schema;
using sparql::CondPtr;
using sparql::PatternPtr;
using sparql::Var;

struct Context {
  const Schema& schema;
  const Constraints& cs;
  const std::string& base;
  directmap::Ontology onto;
  const TranslateOptions& opts;
  size_t next_fresh = 0;

  Var fresh() { return Var{"?__fresh" + std::to_string(next_fresh++)}; }
};

Var attr_var(const std::string& attr) { return Var{"?" + attr}; }

// Renames apart every non-reserved variable of the pattern except the ones
// still visible at this level. Attribute variables dropped by a projection or
// buried as nested rename sources would otherwise collide with the same
// attribute name used by sibling subqueries; after this, an enclosing SELECT
// hides only subtree-local "?__" names.
PatternPtr hide_locals(PatternPtr p, const std::set<std::string>& visible, Context& ctx) {
  std::map<std::string, std::string> ren;
  for (const std::string& v : sparql::pattern_vars(p))
    if (v.rfind("?__", 0) != 0 && !visible.count(v)) ren[v] = ctx.fresh().name;
  return ren.empty() ? std::move(p) : sparql::substitute_variables(p, ren);
}

// Left-associated conjunction of bound(?A) for each listed attribute.
CondPtr all_bound(const std::set<std::string>& attrs) {
  CondPtr out;
  for (const std::string& a : attrs) {
    CondPtr b = sparql::bound(attr_var(a));
    out = out ? sparql::cond_and(out, b) : b;
  }
  return out;
}

PatternPtr tr_expr(const ExprPtr& q, Context& ctx);

// Rows of a class relation: a SELECT over a chain of OPTIONAL literal
// lookups hanging off the typing triple, one per attribute in declared
// order.
PatternPtr class_rows(const relmodel::Relation& rel, Context& ctx) {
  Var row = ctx.fresh();
  PatternPtr p = sparql::triple_pattern(row, Term::iri(rdf::vocab::rdf_type),
                                        Term::iri(directmap::class_iri(ctx.base, rel.name)));
  std::vector<Var> keep;
  for (const std::string& a : rel.attributes) {
    Var v = attr_var(a);
    p = sparql::p_opt(
        p, sparql::triple_pattern(row, Term::iri(directmap::data_property_iri(
                                           ctx.base, rel.name, a)),
                                  v));
    keep.push_back(v);
  }
  return sparql::p_select({}, keep, p);
}

// Rows of a bridge relation: follow its object property once and read the
// two referenced key literals.
PatternPtr bridge_rows(const directmap::BinaryRelation& br, Context& ctx) {
  Var s = ctx.fresh(), t = ctx.fresh();
  Var va = attr_var(br.attr_a), vb = attr_var(br.attr_b);
  PatternPtr p = sparql::p_and(
      sparql::p_and(
          sparql::triple_pattern(s, Term::iri(directmap::binrel_property_iri(ctx.base, br)), t),
          sparql::triple_pattern(
              s, Term::iri(directmap::data_property_iri(ctx.base, br.target_s, br.ref_c)), va)),
      sparql::triple_pattern(
          t, Term::iri(directmap::data_property_iri(ctx.base, br.target_t, br.ref_d)), vb));
  return sparql::p_select({}, {va, vb}, p);
}

PatternPtr tr_select(const relalg::Select& sel, Context& ctx) {
  PatternPtr child = tr_expr(sel.child, ctx);
  Var v = attr_var(sel.cond.attr);
  switch (sel.cond.kind) {
    case relalg::SelKind::Eq:
      return sparql::p_filter(child, sparql::eq_const(v, Term::literal(sel.cond.constant)));
    case relalg::SelKind::Neq:
      return sparql::p_filter(
          child, sparql::cond_and(
                     sparql::cond_not(sparql::eq_const(v, Term::literal(sel.cond.constant))),
                     sparql::bound(v)));
    case relalg::SelKind::IsNull:
      return sparql::p_filter(child, sparql::cond_not(sparql::bound(v)));
    case relalg::SelKind::IsNotNull:
      return sparql::p_filter(child, sparql::bound(v));
  }
  throw TranslateError("unreachable selection kind");
}

PatternPtr tr_join(const relalg::Join& j, Context& ctx) {
  std::set<std::string> left = relalg::attributes(j.left, ctx.schema);
  std::set<std::string> right = relalg::attributes(j.right, ctx.schema);
  std::set<std::string> shared;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                        std::inserter(shared, shared.begin()));
  PatternPtr p1 = tr_expr(j.left, ctx);
  PatternPtr p2 = tr_expr(j.right, ctx);
  if (shared.empty()) return sparql::p_and(p1, p2);
  return sparql::p_and(sparql::p_filter(p1, all_bound(shared)),
                       sparql::p_filter(p2, all_bound(shared)));
}

PatternPtr tr_difference(const relalg::Difference& d, Context& ctx) {
  std::set<std::string> att = relalg::attributes(d.left, ctx.schema);
  std::vector<std::string> attrs(att.begin(), att.end());
  const size_t n = attrs.size();
  if (n > ctx.opts.difference_arity_cap)
    throw TranslateError("difference over " + std::to_string(n) +
                         " attributes expands into 2^" + std::to_string(n) +
                         " united patterns; the cap is " +
                         std::to_string(ctx.opts.difference_arity_cap));

  // For a subset X of the attributes: bound(?A) for members, then
  // !bound(?A) for the rest, both in attribute order.
  auto subset_condition = [&](size_t mask) {
    CondPtr out;
    auto add = [&](CondPtr c) { out = out ? sparql::cond_and(out, c) : c; };
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) add(sparql::bound(attr_var(attrs[i])));
    for (size_t i = 0; i < n; ++i)
      if (!(mask & (size_t{1} << i))) add(sparql::cond_not(sparql::bound(attr_var(attrs[i]))));
    return out;
  };

  // One branch per nonempty subset: rows bound exactly on X are removed by
  // a plain MINUS. Operand translations are re-instantiated per branch so
  // every SELECT keeps its helper variables to itself.
  PatternPtr out;
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    CondPtr rx = subset_condition(mask);
    PatternPtr branch = sparql::p_minus(sparql::p_filter(tr_expr(d.left, ctx), rx),
                                        sparql::p_filter(tr_expr(d.right, ctx), rx));
    out = out ? sparql::p_union(out, branch) : branch;
  }

  // The all-unbound branch: MINUS cannot see the empty mapping, so pair the
  // right side with a wildcard triple and test that it failed to attach.
  CondPtr r0 = subset_condition(0);
  Var x = ctx.fresh(), y = ctx.fresh(), z = ctx.fresh();
  PatternPtr probe = sparql::p_and(sparql::p_filter(tr_expr(d.right, ctx), r0),
                                   sparql::triple_pattern(x, y, z));
  PatternPtr empty_branch =
      sparql::p_filter(sparql::p_opt(sparql::p_filter(tr_expr(d.left, ctx), r0), probe),
                       sparql::cond_not(sparql::bound(x)));
  return out ? sparql::p_union(out, empty_branch) : empty_branch;
}

PatternPtr tr_expr(const ExprPtr& q, Context& ctx) {
  return std::visit(
      [&](const auto& node) -> PatternPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, relalg::BaseRelation>) {
          if (const directmap::BinaryRelation* br = ctx.onto.binary_relation_of(node.name))
            return bridge_rows(*br, ctx);
          return class_rows(ctx.schema.get(node.name), ctx);
        } else if constexpr (std::is_same_v<T, relalg::NullRel>) {
          return sparql::empty_pattern();
        } else if constexpr (std::is_same_v<T, relalg::Select>) {
          return tr_select(node, ctx);
        } else if constexpr (std::is_same_v<T, relalg::Project>) {
          std::vector<Var> keep;
          std::set<std::string> visible;
          for (const std::string& a : node.attrs) {
            keep.push_back(attr_var(a));
            visible.insert(attr_var(a).name);
          }
          return sparql::p_select({}, keep,
                                  hide_locals(tr_expr(node.child, ctx), visible, ctx));
        } else if constexpr (std::is_same_v<T, relalg::Rename>) {
          std::set<std::string> att = relalg::attributes(node.child, ctx.schema);
          std::vector<Var> keep;
          std::set<std::string> visible;
          for (const std::string& a : att) {
            visible.insert(attr_var(a).name);
            if (a != node.from) keep.push_back(attr_var(a));
          }
          return sparql::p_select({{attr_var(node.from), attr_var(node.to)}}, keep,
                                  hide_locals(tr_expr(node.child, ctx), visible, ctx));
        } else if constexpr (std::is_same_v<T, relalg::Join>) {
          return tr_join(node, ctx);
        } else if constexpr (std::is_same_v<T, relalg::Union>) {
          return sparql::p_union(tr_expr(node.left, ctx), tr_expr(node.right, ctx));
        } else {
          static_assert(std::is_same_v<T, relalg::Difference>);
          return tr_difference(node, ctx);
        }
      },
      q->node);
}

}  // namespace

sparql::SolutionMapping tr_tuple(const relmodel::Row& row) {
  sparql::SolutionMapping mu;
  for (const auto& [attr, value] : row)
    if (!value.is_null()) mu["?" + attr] = Term::literal(value.text());
  return mu;
}

sparql::Solutions tr_result(const relalg::ResultSet& rs) {
  sparql::Solutions out;
  for (const relmodel::Row& row : rs.rows) out.insert(tr_tuple(row));
  return out;
}

sparql::PatternPtr translate(const relalg::ExprPtr& q, const Schema& schema,
                             const Constraints& cs, const std::string& base,
                             const TranslateOptions& opts) {
  relalg::attributes(q, schema);  // reject ill-formed input up front
  Context ctx{schema, cs, base, directmap::extract_ontology(schema, cs), opts};
  PatternPtr p = tr_expr(q, ctx);
  sparql::validate_pattern(p);
  if (!sparql::is_non_parametric(p))
    throw TranslateError("internal error: translation produced a parametric pattern");
  return p;
}

sparql::PatternPtr translate(const relalg::ExprPtr& q, const relmodel::Database& db,
                             const TranslateOptions& opts) {
  return translate(q, db.schema, db.constraints, db.base, opts);
}

}  // namespace rdb2owl::ra2sparql
