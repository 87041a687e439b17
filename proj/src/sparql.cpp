#include "rdb2owl/sparql.hpp"

#include <algorithm>

namespace rdb2owl::sparql {

using nlohmann::json;

CondPtr bound(Var v) { return std::make_shared<Condition>(Condition{CondBound{std::move(v)}}); }
CondPtr eq_const(Var v, rdf::Term c) {
  return std::make_shared<Condition>(Condition{CondEqConst{std::move(v), std::move(c)}});
}
CondPtr eq_var(Var a, Var b) {
  return std::make_shared<Condition>(Condition{CondEqVar{std::move(a), std::move(b)}});
}
CondPtr cond_not(CondPtr c) {
  return std::make_shared<Condition>(Condition{CondNot{std::move(c)}});
}
CondPtr cond_and(CondPtr l, CondPtr r) {
  return std::make_shared<Condition>(Condition{CondAnd{std::move(l), std::move(r)}});
}
CondPtr cond_or(CondPtr l, CondPtr r) {
  return std::make_shared<Condition>(Condition{CondOr{std::move(l), std::move(r)}});
}

PatternPtr empty_pattern() { return std::make_shared<Pattern>(Pattern{Empty{}}); }
PatternPtr triple_pattern(TermOrVar s, TermOrVar p, TermOrVar o) {
  return std::make_shared<Pattern>(
      Pattern{TriplePattern{std::move(s), std::move(p), std::move(o)}});
}
PatternPtr p_and(PatternPtr l, PatternPtr r) {
  return std::make_shared<Pattern>(Pattern{And{std::move(l), std::move(r)}});
}
PatternPtr p_opt(PatternPtr l, PatternPtr r) {
  return std::make_shared<Pattern>(Pattern{Opt{std::move(l), std::move(r)}});
}
PatternPtr p_union(PatternPtr l, PatternPtr r) {
  return std::make_shared<Pattern>(Pattern{UnionP{std::move(l), std::move(r)}});
}
PatternPtr p_minus(PatternPtr l, PatternPtr r) {
  return std::make_shared<Pattern>(Pattern{Minus{std::move(l), std::move(r)}});
}
PatternPtr p_filter(PatternPtr child, CondPtr cond) {
  return std::make_shared<Pattern>(Pattern{Filter{std::move(child), std::move(cond)}});
}
PatternPtr p_select(std::vector<std::pair<Var, Var>> renames, std::vector<Var> keep,
                    PatternPtr child) {
  return std::make_shared<Pattern>(
      Pattern{SelectP{std::move(renames), std::move(keep), std::move(child)}});
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void cond_vars(const CondPtr& c, std::set<std::string>& out) {
  std::visit(overloaded{[&](const CondBound& b) { out.insert(b.var.name); },
                        [&](const CondEqConst& e) { out.insert(e.var.name); },
                        [&](const CondEqVar& e) {
                          out.insert(e.left.name);
                          out.insert(e.right.name);
                        },
                        [&](const CondNot& n) { cond_vars(n.arg, out); },
                        [&](const CondAnd& a) {
                          cond_vars(a.left, out);
                          cond_vars(a.right, out);
                        },
                        [&](const CondOr& o) {
                          cond_vars(o.left, out);
                          cond_vars(o.right, out);
                        }},
             c->node);
}

void collect_vars(const PatternPtr& p, std::set<std::string>& out) {
  std::visit(overloaded{[&](const Empty&) {},
                        [&](const TriplePattern& t) {
                          for (const TermOrVar* e : {&t.subject, &t.predicate, &t.object})
                            if (const Var* v = std::get_if<Var>(e)) out.insert(v->name);
                        },
                        [&](const And& n) {
                          collect_vars(n.left, out);
                          collect_vars(n.right, out);
                        },
                        [&](const Opt& n) {
                          collect_vars(n.left, out);
                          collect_vars(n.right, out);
                        },
                        [&](const UnionP& n) {
                          collect_vars(n.left, out);
                          collect_vars(n.right, out);
                        },
                        [&](const Minus& n) {
                          collect_vars(n.left, out);
                          collect_vars(n.right, out);
                        },
                        [&](const Filter& f) {
                          collect_vars(f.child, out);
                          cond_vars(f.cond, out);
                        },
                        [&](const SelectP& s) {
                          for (const auto& [a, b] : s.renames) {
                            out.insert(a.name);
                            out.insert(b.name);
                          }
                          for (const auto& c : s.keep) out.insert(c.name);
                          collect_vars(s.child, out);
                        }},
             p->node);
}

size_t count_cond(const CondPtr& c, const std::string& x) {
  return std::visit(
      overloaded{[&](const CondBound& b) -> size_t { return b.var.name == x; },
                 [&](const CondEqConst& e) -> size_t { return e.var.name == x; },
                 [&](const CondEqVar& e) -> size_t {
                   return size_t(e.left.name == x) + size_t(e.right.name == x);
                 },
                 [&](const CondNot& n) { return count_cond(n.arg, x); },
                 [&](const CondAnd& a) { return count_cond(a.left, x) + count_cond(a.right, x); },
                 [&](const CondOr& o) { return count_cond(o.left, x) + count_cond(o.right, x); }},
      c->node);
}

// Number of occurrences of variable x anywhere in the pattern tree; shared
// subtrees count once per occurrence in the tree.
size_t count_var(const PatternPtr& p, const std::string& x) {
  return std::visit(
      overloaded{[&](const Empty&) -> size_t { return 0; },
                 [&](const TriplePattern& t) -> size_t {
                   size_t n = 0;
                   for (const TermOrVar* e : {&t.subject, &t.predicate, &t.object})
                     if (const Var* v = std::get_if<Var>(e))
                       if (v->name == x) ++n;
                   return n;
                 },
                 [&](const And& n) { return count_var(n.left, x) + count_var(n.right, x); },
                 [&](const Opt& n) { return count_var(n.left, x) + count_var(n.right, x); },
                 [&](const UnionP& n) { return count_var(n.left, x) + count_var(n.right, x); },
                 [&](const Minus& n) { return count_var(n.left, x) + count_var(n.right, x); },
                 [&](const Filter& f) { return count_var(f.child, x) + count_cond(f.cond, x); },
                 [&](const SelectP& s) {
                   size_t n = count_var(s.child, x);
                   for (const auto& [a, b] : s.renames) {
                     if (a.name == x) ++n;
                     if (b.name == x) ++n;
                   }
                   for (const auto& c : s.keep)
                     if (c.name == x) ++n;
                   return n;
                 }},
      p->node);
}

void validate_impl(const PatternPtr& p) {
  std::visit(
      overloaded{
          [&](const Empty&) {},
          [&](const TriplePattern& t) {
            auto check = [](const TermOrVar& e, bool allow_literal, const char* where) {
              if (const Var* v = std::get_if<Var>(&e)) {
                if (v->name.size() < 2 || v->name[0] != '?')
                  throw EvalError(std::string("variable in ") + where +
                                  " must start with '?' and be nonempty");
                return;
              }
              const rdf::Term& term = std::get<rdf::Term>(e);
              if (term.is_blank())
                throw EvalError(std::string("blank node not allowed in triple pattern ") + where);
              if (!allow_literal && term.is_literal())
                throw EvalError(std::string("literal not allowed as ") + where);
            };
            check(t.subject, true, "subject");
            check(t.predicate, false, "predicate");
            check(t.object, true, "object");
          },
          [&](const And& n) {
            validate_impl(n.left);
            validate_impl(n.right);
          },
          [&](const Opt& n) {
            validate_impl(n.left);
            validate_impl(n.right);
          },
          [&](const UnionP& n) {
            validate_impl(n.left);
            validate_impl(n.right);
          },
          [&](const Minus& n) {
            validate_impl(n.left);
            validate_impl(n.right);
          },
          [&](const Filter& f) { validate_impl(f.child); },
          [&](const SelectP& s) {
            std::set<std::string> listed;
            auto add = [&](const Var& v) {
              if (v.name.size() < 2 || v.name[0] != '?')
                throw EvalError("select-list variable must start with '?'");
              if (!listed.insert(v.name).second)
                throw EvalError("select list repeats variable " + v.name);
            };
            for (const auto& [a, b] : s.renames) {
              add(a);
              add(b);
            }
            for (const auto& c : s.keep) add(c);
            std::set<std::string> inner;
            collect_vars(s.child, inner);
            for (const auto& [a, b] : s.renames)
              if (inner.count(b.name))
                throw EvalError("rename target " + b.name + " occurs in the select operand");
            validate_impl(s.child);
          }},
      p->node);
}

// Walks all SELECT occurrences; for each, checks its hidden variables never
// occur outside that occurrence (counted against the whole pattern).
bool non_parametric_walk(const PatternPtr& node, const PatternPtr& root) {
  bool ok = std::visit(
      overloaded{[&](const Empty&) { return true; },
                 [&](const TriplePattern&) { return true; },
                 [&](const And& n) {
                   return non_parametric_walk(n.left, root) && non_parametric_walk(n.right, root);
                 },
                 [&](const Opt& n) {
                   return non_parametric_walk(n.left, root) && non_parametric_walk(n.right, root);
                 },
                 [&](const UnionP& n) {
                   return non_parametric_walk(n.left, root) && non_parametric_walk(n.right, root);
                 },
                 [&](const Minus& n) {
                   return non_parametric_walk(n.left, root) && non_parametric_walk(n.right, root);
                 },
                 [&](const Filter& f) { return non_parametric_walk(f.child, root); },
                 [&](const SelectP& s) { return non_parametric_walk(s.child, root); }},
      node->node);
  if (!ok) return false;
  if (const SelectP* s = std::get_if<SelectP>(&node->node)) {
    std::set<std::string> listed;
    for (const auto& [a, b] : s->renames) listed.insert(a.name);
    for (const auto& c : s->keep) listed.insert(c.name);
    std::set<std::string> inner;
    collect_vars(s->child, inner);
    for (const auto& x : inner) {
      if (listed.count(x)) continue;
      if (count_var(root, x) != count_var(node, x)) return false;
    }
  }
  return true;
}

Var subst_var(const Var& v, const std::map<std::string, std::string>& ren) {
  auto it = ren.find(v.name);
  return it == ren.end() ? v : Var{it->second};
}

TermOrVar subst_component(const TermOrVar& e, const std::map<std::string, std::string>& ren) {
  if (const Var* v = std::get_if<Var>(&e)) return subst_var(*v, ren);
  return e;
}

CondPtr subst_cond(const CondPtr& c, const std::map<std::string, std::string>& ren) {
  return std::visit(
      overloaded{[&](const CondBound& b) { return bound(subst_var(b.var, ren)); },
                 [&](const CondEqConst& e) { return eq_const(subst_var(e.var, ren), e.constant); },
                 [&](const CondEqVar& e) {
                   return eq_var(subst_var(e.left, ren), subst_var(e.right, ren));
                 },
                 [&](const CondNot& n) { return cond_not(subst_cond(n.arg, ren)); },
                 [&](const CondAnd& a) {
                   return cond_and(subst_cond(a.left, ren), subst_cond(a.right, ren));
                 },
                 [&](const CondOr& o) {
                   return cond_or(subst_cond(o.left, ren), subst_cond(o.right, ren));
                 }},
      c->node);
}

PatternPtr subst_pattern(const PatternPtr& p, const std::map<std::string, std::string>& ren) {
  return std::visit(
      overloaded{[&](const Empty&) { return empty_pattern(); },
                 [&](const TriplePattern& t) {
                   return triple_pattern(subst_component(t.subject, ren),
                                         subst_component(t.predicate, ren),
                                         subst_component(t.object, ren));
                 },
                 [&](const And& n) {
                   return p_and(subst_pattern(n.left, ren), subst_pattern(n.right, ren));
                 },
                 [&](const Opt& n) {
                   return p_opt(subst_pattern(n.left, ren), subst_pattern(n.right, ren));
                 },
                 [&](const UnionP& n) {
                   return p_union(subst_pattern(n.left, ren), subst_pattern(n.right, ren));
                 },
                 [&](const Minus& n) {
                   return p_minus(subst_pattern(n.left, ren), subst_pattern(n.right, ren));
                 },
                 [&](const Filter& f) {
                   return p_filter(subst_pattern(f.child, ren), subst_cond(f.cond, ren));
                 },
                 [&](const SelectP& s) {
                   std::vector<std::pair<Var, Var>> renames;
                   renames.reserve(s.renames.size());
                   for (const auto& [a, b] : s.renames)
                     renames.emplace_back(subst_var(a, ren), subst_var(b, ren));
                   std::vector<Var> keep;
                   keep.reserve(s.keep.size());
                   for (const auto& c : s.keep) keep.push_back(subst_var(c, ren));
                   return p_select(std::move(renames), std::move(keep),
                                   subst_pattern(s.child, ren));
                 }},
      p->node);
}

}  // namespace

std::set<std::string> pattern_vars(const PatternPtr& p) {
  std::set<std::string> out;
  collect_vars(p, out);
  return out;
}

PatternPtr substitute_variables(const PatternPtr& p,
                                const std::map<std::string, std::string>& renaming) {
  if (!p) throw EvalError("null pattern");
  if (renaming.empty()) return p;
  return subst_pattern(p, renaming);
}

void validate_pattern(const PatternPtr& p) {
  if (!p) throw EvalError("null pattern");
  validate_impl(p);
}

bool is_non_parametric(const PatternPtr& p) { return non_parametric_walk(p, p); }

bool mappings_compatible(const SolutionMapping& a, const SolutionMapping& b) {
  // Walk the smaller of the two.
  const SolutionMapping& small = a.size() <= b.size() ? a : b;
  const SolutionMapping& large = a.size() <= b.size() ? b : a;
  for (const auto& [k, v] : small) {
    auto it = large.find(k);
    if (it != large.end() && !(it->second == v)) return false;
  }
  return true;
}

bool satisfies_condition(const SolutionMapping& mu, const CondPtr& cond) {
  return std::visit(
      overloaded{[&](const CondBound& b) { return mu.count(b.var.name) > 0; },
                 [&](const CondEqConst& e) {
                   auto it = mu.find(e.var.name);
                   return it != mu.end() && it->second == e.constant;
                 },
                 [&](const CondEqVar& e) {
                   auto l = mu.find(e.left.name);
                   auto r = mu.find(e.right.name);
                   return l != mu.end() && r != mu.end() && l->second == r->second;
                 },
                 [&](const CondNot& n) { return !satisfies_condition(mu, n.arg); },
                 [&](const CondAnd& a) {
                   return satisfies_condition(mu, a.left) && satisfies_condition(mu, a.right);
                 },
                 [&](const CondOr& o) {
                   return satisfies_condition(mu, o.left) || satisfies_condition(mu, o.right);
                 }},
      cond->node);
}

namespace {

Solutions eval_impl(const PatternPtr& p, const rdf::Graph& g) {
  return std::visit(
      overloaded{
          [&](const Empty&) {
            Solutions out;
            if (!g.empty()) out.insert(SolutionMapping{});
            return out;
          },
          [&](const TriplePattern& tp) {
            Solutions out;
            for (const rdf::Triple& t : g) {
              SolutionMapping mu;
              bool ok = true;
              auto bind = [&](const TermOrVar& e, const rdf::Term& val) {
                if (const Var* v = std::get_if<Var>(&e)) {
                  auto it = mu.find(v->name);
                  if (it == mu.end())
                    mu.emplace(v->name, val);
                  else if (!(it->second == val))
                    ok = false;
                } else if (!(std::get<rdf::Term>(e) == val)) {
                  ok = false;
                }
              };
              bind(tp.subject, t.subject);
              if (ok) bind(tp.predicate, t.predicate);
              if (ok) bind(tp.object, t.object);
              if (ok) out.insert(std::move(mu));
            }
            return out;
          },
          [&](const And& n) {
            Solutions l = eval_impl(n.left, g);
            Solutions r = eval_impl(n.right, g);
            Solutions out;
            for (const auto& m1 : l)
              for (const auto& m2 : r)
                if (mappings_compatible(m1, m2)) {
                  SolutionMapping u = m1;
                  u.insert(m2.begin(), m2.end());
                  out.insert(std::move(u));
                }
            return out;
          },
          [&](const Opt& n) {
            Solutions l = eval_impl(n.left, g);
            Solutions r = eval_impl(n.right, g);
            Solutions out;
            for (const auto& m1 : l) {
              bool any = false;
              for (const auto& m2 : r)
                if (mappings_compatible(m1, m2)) {
                  any = true;
                  SolutionMapping u = m1;
                  u.insert(m2.begin(), m2.end());
                  out.insert(std::move(u));
                }
              if (!any) out.insert(m1);
            }
            return out;
          },
          [&](const UnionP& n) {
            Solutions l = eval_impl(n.left, g);
            Solutions r = eval_impl(n.right, g);
            l.insert(r.begin(), r.end());
            return l;
          },
          [&](const Minus& n) {
            Solutions l = eval_impl(n.left, g);
            Solutions r = eval_impl(n.right, g);
            Solutions out;
            for (const auto& m1 : l) {
              bool keep = true;
              for (const auto& m2 : r) {
                if (!mappings_compatible(m1, m2)) continue;
                bool disjoint = true;
                for (const auto& [k, v] : m2)
                  if (m1.count(k)) {
                    disjoint = false;
                    break;
                  }
                if (!disjoint) {
                  keep = false;
                  break;
                }
              }
              if (keep) out.insert(m1);
            }
            return out;
          },
          [&](const Filter& f) {
            Solutions in = eval_impl(f.child, g);
            Solutions out;
            for (const auto& mu : in)
              if (satisfies_condition(mu, f.cond)) out.insert(mu);
            return out;
          },
          [&](const SelectP& s) {
            Solutions in = eval_impl(s.child, g);
            Solutions out;
            for (const auto& mu : in) {
              SolutionMapping res;
              for (const auto& [a, b] : s.renames) {
                auto it = mu.find(a.name);
                if (it != mu.end()) res.emplace(b.name, it->second);
              }
              for (const auto& c : s.keep) {
                auto it = mu.find(c.name);
                if (it != mu.end()) res.emplace(c.name, it->second);
              }
              out.insert(std::move(res));
            }
            return out;
          }},
      p->node);
}

}  // namespace

Solutions eval_pattern(const PatternPtr& p, const rdf::Graph& g) {
  validate_pattern(p);
  if (!is_non_parametric(p))
    throw EvalError("pattern is parametric: a projected-away variable occurs outside its SELECT");
  return eval_impl(p, g);
}

namespace {

std::string term_or_var_text(const TermOrVar& e) {
  if (const Var* v = std::get_if<Var>(&e)) return v->name;
  return rdf::term_to_ntriples(std::get<rdf::Term>(e));
}

std::string cond_text(const CondPtr& c) {
  return std::visit(
      overloaded{[&](const CondBound& b) { return "BOUND(" + b.var.name + ")"; },
                 [&](const CondEqConst& e) {
                   return "(" + e.var.name + " = " + rdf::term_to_ntriples(e.constant) + ")";
                 },
                 [&](const CondEqVar& e) {
                   return "(" + e.left.name + " = " + e.right.name + ")";
                 },
                 [&](const CondNot& n) { return "(! " + cond_text(n.arg) + ")"; },
                 [&](const CondAnd& a) {
                   return "(" + cond_text(a.left) + " && " + cond_text(a.right) + ")";
                 },
                 [&](const CondOr& o) {
                   return "(" + cond_text(o.left) + " || " + cond_text(o.right) + ")";
                 }},
      c->node);
}

std::string select_head(const SelectP& s) {
  std::string head;
  for (const auto& [a, b] : s.renames) head += "(" + a.name + " AS " + b.name + ") ";
  for (const auto& c : s.keep) head += c.name + " ";
  if (head.empty()) head = " ";  // SELECT with an empty list is not legal; never produced
  return head;
}

}  // namespace

std::string serialize_pattern(const PatternPtr& p) {
  return std::visit(
      overloaded{[&](const Empty&) -> std::string { return "{ }"; },
                 [&](const TriplePattern& t) {
                   return "{ " + term_or_var_text(t.subject) + " " +
                          term_or_var_text(t.predicate) + " " + term_or_var_text(t.object) +
                          " . }";
                 },
                 [&](const And& n) {
                   return "{ " + serialize_pattern(n.left) + " " + serialize_pattern(n.right) +
                          " }";
                 },
                 [&](const Opt& n) {
                   return "{ " + serialize_pattern(n.left) + " OPTIONAL " +
                          serialize_pattern(n.right) + " }";
                 },
                 [&](const UnionP& n) {
                   return "{ " + serialize_pattern(n.left) + " UNION " +
                          serialize_pattern(n.right) + " }";
                 },
                 [&](const Minus& n) {
                   return "{ " + serialize_pattern(n.left) + " MINUS " +
                          serialize_pattern(n.right) + " }";
                 },
                 [&](const Filter& f) {
                   return "{ " + serialize_pattern(f.child) + " FILTER " + cond_text(f.cond) +
                          " }";
                 },
                 [&](const SelectP& s) {
                   return "{ SELECT " + select_head(s) + "WHERE " + serialize_pattern(s.child) +
                          " }";
                 }},
      p->node);
}

std::string serialize_query(const PatternPtr& p) {
  if (const SelectP* s = std::get_if<SelectP>(&p->node))
    return "SELECT " + select_head(*s) + "WHERE " + serialize_pattern(s->child);
  return "SELECT * WHERE " + serialize_pattern(p);
}

namespace {

json term_or_var_json(const TermOrVar& e) {
  if (const Var* v = std::get_if<Var>(&e)) return json{{"var", v->name}};
  const rdf::Term& t = std::get<rdf::Term>(e);
  switch (t.kind()) {
    case rdf::TermKind::Iri: return json{{"iri", t.text()}};
    case rdf::TermKind::BlankNode: return json{{"blank", t.text()}};
    case rdf::TermKind::Literal: return json{{"literal", t.text()}};
  }
  return {};
}

json cond_json(const CondPtr& c) {
  return std::visit(
      overloaded{
          [&](const CondBound& b) { return json{{"op", "bound"}, {"var", b.var.name}}; },
          [&](const CondEqConst& e) {
            return json{{"op", "eq-const"},
                        {"var", e.var.name},
                        {"const", term_or_var_json(TermOrVar{e.constant})}};
          },
          [&](const CondEqVar& e) {
            return json{{"op", "eq-var"}, {"left", e.left.name}, {"right", e.right.name}};
          },
          [&](const CondNot& n) { return json{{"op", "not"}, {"arg", cond_json(n.arg)}}; },
          [&](const CondAnd& a) {
            return json{{"op", "and"}, {"left", cond_json(a.left)}, {"right", cond_json(a.right)}};
          },
          [&](const CondOr& o) {
            return json{{"op", "or"}, {"left", cond_json(o.left)}, {"right", cond_json(o.right)}};
          }},
      c->node);
}

}  // namespace

nlohmann::json pattern_to_json(const PatternPtr& p) {
  return std::visit(
      overloaded{[&](const Empty&) { return json{{"kind", "empty"}}; },
                 [&](const TriplePattern& t) {
                   return json{{"kind", "triple"},
                               {"subject", term_or_var_json(t.subject)},
                               {"predicate", term_or_var_json(t.predicate)},
                               {"object", term_or_var_json(t.object)}};
                 },
                 [&](const And& n) {
                   return json{{"kind", "and"},
                               {"left", pattern_to_json(n.left)},
                               {"right", pattern_to_json(n.right)}};
                 },
                 [&](const Opt& n) {
                   return json{{"kind", "opt"},
                               {"left", pattern_to_json(n.left)},
                               {"right", pattern_to_json(n.right)}};
                 },
                 [&](const UnionP& n) {
                   return json{{"kind", "union"},
                               {"left", pattern_to_json(n.left)},
                               {"right", pattern_to_json(n.right)}};
                 },
                 [&](const Minus& n) {
                   return json{{"kind", "minus"},
                               {"left", pattern_to_json(n.left)},
                               {"right", pattern_to_json(n.right)}};
                 },
                 [&](const Filter& f) {
                   return json{{"kind", "filter"},
                               {"condition", cond_json(f.cond)},
                               {"child", pattern_to_json(f.child)}};
                 },
                 [&](const SelectP& s) {
                   json renames = json::array();
                   for (const auto& [a, b] : s.renames)
                     renames.push_back(json::array({a.name, b.name}));
                   json keep = json::array();
                   for (const auto& c : s.keep) keep.push_back(c.name);
                   return json{{"kind", "select"},
                               {"renames", std::move(renames)},
                               {"keep", std::move(keep)},
                               {"child", pattern_to_json(s.child)}};
                 }},
      p->node);
}

nlohmann::json solutions_to_json(const Solutions& sols) {
  json out = json::array();
  for (const auto& mu : sols) {
    json jm = json::object();
    for (const auto& [var, term] : mu) {
      if (term.is_literal())
        jm[var] = json{{"literal", term.text()}};
      else if (term.is_iri())
        jm[var] = json{{"iri", term.text()}};
      else
        jm[var] = json{{"blank", term.text()}};
    }
    out.push_back(std::move(jm));
  }
  return out;
}

}  // namespace rdb2owl::sparql
