#include "oracles.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace rdb2owl::oracle {

namespace {

using relmodel::Value;
using NaiveRow = std::map<std::string, Value>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool value_eq(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
  return a.text() == b.text();
}

bool row_eq(const NaiveRow& a, const NaiveRow& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || !value_eq(v, it->second)) return false;
  }
  return true;
}

bool row_in(const NaiveRow& row, const std::vector<NaiveRow>& rows) {
  for (const NaiveRow& r : rows)
    if (row_eq(row, r)) return true;
  return false;
}

std::string row_key(const NaiveRow& row) {
  std::ostringstream s;
  for (const auto& [k, v] : row) {
    s << k << '\x1f';
    if (v.is_null())
      s << '\x00';
    else
      s << '=' << v.text();
    s << '\x1e';
  }
  return s.str();
}

std::vector<std::string> sorted_union(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  std::set<std::string> u(a.begin(), a.end());
  u.insert(b.begin(), b.end());
  return {u.begin(), u.end()};
}

}  // namespace

Table eval_naive(const relalg::ExprPtr& e, const relmodel::Database& db) {
  if (!e) throw std::invalid_argument("eval_naive: null expression");
  return std::visit(
      overloaded{
          [&](const relalg::BaseRelation& n) {
            const relmodel::Relation* rel = db.schema.find(n.name);
            if (!rel) throw std::invalid_argument("eval_naive: unknown relation " + n.name);
            Table t;
            t.attrs.assign(rel->attributes.begin(), rel->attributes.end());
            std::sort(t.attrs.begin(), t.attrs.end());
            auto it = db.instance.find(n.name);
            if (it != db.instance.end())
              for (const relmodel::Tuple& tuple : it->second) t.rows.push_back(tuple.values);
            return t;
          },
          [&](const relalg::NullRel& n) {
            Table t;
            t.attrs = {n.attr};
            t.rows.push_back({{n.attr, Value::null()}});
            return t;
          },
          [&](const relalg::Select& n) {
            Table child = eval_naive(n.child, db);
            Table t;
            t.attrs = child.attrs;
            for (const NaiveRow& row : child.rows) {
              const Value& v = row.at(n.cond.attr);
              bool keep = false;
              switch (n.cond.kind) {
                case relalg::SelKind::Eq:
                  keep = !v.is_null() && v.text() == n.cond.constant;
                  break;
                case relalg::SelKind::Neq:
                  keep = !v.is_null() && v.text() != n.cond.constant;
                  break;
                case relalg::SelKind::IsNull:
                  keep = v.is_null();
                  break;
                case relalg::SelKind::IsNotNull:
                  keep = !v.is_null();
                  break;
              }
              if (keep) t.rows.push_back(row);
            }
            return t;
          },
          [&](const relalg::Project& n) {
            Table child = eval_naive(n.child, db);
            Table t;
            t.attrs = n.attrs;
            for (const NaiveRow& row : child.rows) {
              NaiveRow slim;
              for (const std::string& a : n.attrs) slim[a] = row.at(a);
              t.rows.push_back(std::move(slim));
            }
            return t;
          },
          [&](const relalg::Rename& n) {
            Table child = eval_naive(n.child, db);
            Table t;
            for (const std::string& a : child.attrs) t.attrs.push_back(a == n.from ? n.to : a);
            std::sort(t.attrs.begin(), t.attrs.end());
            for (const NaiveRow& row : child.rows) {
              NaiveRow renamed;
              for (const auto& [k, v] : row) renamed[k == n.from ? n.to : k] = v;
              t.rows.push_back(std::move(renamed));
            }
            return t;
          },
          [&](const relalg::Join& n) {
            Table l = eval_naive(n.left, db);
            Table r = eval_naive(n.right, db);
            std::vector<std::string> shared;
            for (const std::string& a : l.attrs)
              if (std::find(r.attrs.begin(), r.attrs.end(), a) != r.attrs.end())
                shared.push_back(a);
            Table t;
            t.attrs = sorted_union(l.attrs, r.attrs);
            for (const NaiveRow& lr : l.rows)
              for (const NaiveRow& rr : r.rows) {
                bool match = true;
                for (const std::string& a : shared) {
                  const Value& lv = lr.at(a);
                  const Value& rv = rr.at(a);
                  if (lv.is_null() || rv.is_null() || lv.text() != rv.text()) {
                    match = false;
                    break;
                  }
                }
                if (!match) continue;
                NaiveRow merged = lr;
                merged.insert(rr.begin(), rr.end());
                t.rows.push_back(std::move(merged));
              }
            return t;
          },
          [&](const relalg::Union& n) {
            Table l = eval_naive(n.left, db);
            Table r = eval_naive(n.right, db);
            l.rows.insert(l.rows.end(), r.rows.begin(), r.rows.end());
            return l;
          },
          [&](const relalg::Difference& n) {
            Table l = eval_naive(n.left, db);
            Table r = eval_naive(n.right, db);
            Table t;
            t.attrs = l.attrs;
            for (const NaiveRow& row : l.rows)
              if (!row_in(row, r.rows)) t.rows.push_back(row);
            return t;
          }},
      e->node);
}

Table left_outer_join_naive(const Table& left, const Table& right) {
  std::vector<std::string> shared, right_only;
  for (const std::string& a : right.attrs) {
    if (std::find(left.attrs.begin(), left.attrs.end(), a) != left.attrs.end())
      shared.push_back(a);
    else
      right_only.push_back(a);
  }
  Table t;
  t.attrs = sorted_union(left.attrs, right.attrs);
  for (const NaiveRow& lr : left.rows) {
    bool any = false;
    for (const NaiveRow& rr : right.rows) {
      bool match = true;
      for (const std::string& a : shared) {
        const Value& lv = lr.at(a);
        const Value& rv = rr.at(a);
        if (lv.is_null() || rv.is_null() || lv.text() != rv.text()) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      any = true;
      NaiveRow merged = lr;
      merged.insert(rr.begin(), rr.end());
      t.rows.push_back(std::move(merged));
    }
    if (!any) {
      NaiveRow padded = lr;
      for (const std::string& a : right_only) padded[a] = Value::null();
      t.rows.push_back(std::move(padded));
    }
  }
  return t;
}

Table to_table(const relalg::ResultSet& rs) {
  Table t;
  t.attrs.assign(rs.attrs.begin(), rs.attrs.end());
  std::sort(t.attrs.begin(), t.attrs.end());
  for (const relmodel::Row& row : rs.rows) t.rows.push_back(row);
  return t;
}

bool same_table(const Table& a, const Table& b) {
  std::vector<std::string> aa = a.attrs, bb = b.attrs;
  std::sort(aa.begin(), aa.end());
  std::sort(bb.begin(), bb.end());
  if (aa != bb) return false;
  std::set<std::string> ka, kb;
  for (const NaiveRow& r : a.rows) ka.insert(row_key(r));
  for (const NaiveRow& r : b.rows) kb.insert(row_key(r));
  return ka == kb;
}

namespace {

// The key condition of the integrity-constraint definitions: no NULL in the
// listed columns and no two distinct tuples agreeing on all of them.
bool key_condition_holds(const relmodel::Database& db, const std::string& relation,
                         const std::vector<std::string>& attrs) {
  auto it = db.instance.find(relation);
  if (it == db.instance.end()) return true;
  const std::vector<relmodel::Tuple>& rows = it->second;
  for (const relmodel::Tuple& t : rows)
    for (const std::string& a : attrs)
      if (t.values.at(a).is_null()) return false;
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = i + 1; j < rows.size(); ++j) {
      bool agree = true;
      for (const std::string& a : attrs)
        if (!value_eq(rows[i].values.at(a), rows[j].values.at(a))) {
          agree = false;
          break;
        }
      if (agree) return false;
    }
  return true;
}

}  // namespace

bool satisfies_naive(const relmodel::Database& db) {
  for (const relmodel::PrimaryKey& pk : db.constraints.primary_keys)
    if (!key_condition_holds(db, pk.relation, pk.attributes)) return false;
  for (const relmodel::ForeignKey& fk : db.constraints.foreign_keys) {
    if (!key_condition_holds(db, fk.ref_relation, fk.ref_attributes)) return false;
    auto src = db.instance.find(fk.relation);
    if (src == db.instance.end()) continue;
    auto dst = db.instance.find(fk.ref_relation);
    for (const relmodel::Tuple& t : src->second) {
      bool has_null = false;
      for (const std::string& a : fk.attributes)
        if (t.values.at(a).is_null()) {
          has_null = true;
          break;
        }
      if (has_null) continue;
      bool matched = false;
      if (dst != db.instance.end())
        for (const relmodel::Tuple& s : dst->second) {
          bool all = true;
          for (size_t i = 0; i < fk.attributes.size(); ++i) {
            const Value& sv = s.values.at(fk.ref_attributes[i]);
            if (sv.is_null() || sv.text() != t.values.at(fk.attributes[i]).text()) {
              all = false;
              break;
            }
          }
          if (all) {
            matched = true;
            break;
          }
        }
      if (!matched) return false;
    }
  }
  return true;
}

namespace {

using Mu = sparql::SolutionMapping;

bool mu_compatible(const Mu& a, const Mu& b) {
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it != b.end() && !(it->second == v)) return false;
  }
  return true;
}

Mu mu_merge(const Mu& a, const Mu& b) {
  Mu out = a;
  out.insert(b.begin(), b.end());
  return out;
}

bool cond_true(const Mu& mu, const sparql::CondPtr& c) {
  return std::visit(
      overloaded{[&](const sparql::CondBound& n) { return mu.count(n.var.name) > 0; },
                 [&](const sparql::CondEqConst& n) {
                   auto it = mu.find(n.var.name);
                   return it != mu.end() && it->second == n.constant;
                 },
                 [&](const sparql::CondEqVar& n) {
                   auto a = mu.find(n.left.name);
                   auto b = mu.find(n.right.name);
                   return a != mu.end() && b != mu.end() && a->second == b->second;
                 },
                 [&](const sparql::CondNot& n) { return !cond_true(mu, n.arg); },
                 [&](const sparql::CondAnd& n) {
                   return cond_true(mu, n.left) && cond_true(mu, n.right);
                 },
                 [&](const sparql::CondOr& n) {
                   return cond_true(mu, n.left) || cond_true(mu, n.right);
                 }},
      c->node);
}

bool component_match(const sparql::TermOrVar& part, const rdf::Term& term, Mu& mu) {
  if (const rdf::Term* fixed = std::get_if<rdf::Term>(&part)) return *fixed == term;
  const sparql::Var& v = std::get<sparql::Var>(part);
  auto it = mu.find(v.name);
  if (it != mu.end()) return it->second == term;
  mu[v.name] = term;
  return true;
}

std::vector<Mu> eval_list(const sparql::PatternPtr& p, const rdf::Graph& g) {
  return std::visit(
      overloaded{
          [&](const sparql::Empty&) {
            std::vector<Mu> out;
            if (!g.empty()) out.push_back(Mu{});
            return out;
          },
          [&](const sparql::TriplePattern& tp) {
            std::vector<Mu> out;
            for (const rdf::Triple& t : g) {
              Mu mu;
              if (component_match(tp.subject, t.subject, mu) &&
                  component_match(tp.predicate, t.predicate, mu) &&
                  component_match(tp.object, t.object, mu))
                out.push_back(std::move(mu));
            }
            return out;
          },
          [&](const sparql::And& n) {
            std::vector<Mu> l = eval_list(n.left, g), r = eval_list(n.right, g), out;
            for (const Mu& a : l)
              for (const Mu& b : r)
                if (mu_compatible(a, b)) out.push_back(mu_merge(a, b));
            return out;
          },
          [&](const sparql::Opt& n) {
            std::vector<Mu> l = eval_list(n.left, g), r = eval_list(n.right, g), out;
            for (const Mu& a : l) {
              bool extended = false;
              for (const Mu& b : r)
                if (mu_compatible(a, b)) {
                  extended = true;
                  out.push_back(mu_merge(a, b));
                }
              if (!extended) out.push_back(a);
            }
            return out;
          },
          [&](const sparql::UnionP& n) {
            std::vector<Mu> out = eval_list(n.left, g), r = eval_list(n.right, g);
            out.insert(out.end(), r.begin(), r.end());
            return out;
          },
          [&](const sparql::Minus& n) {
            std::vector<Mu> l = eval_list(n.left, g), r = eval_list(n.right, g), out;
            for (const Mu& a : l) {
              bool keep = true;
              for (const Mu& b : r) {
                if (!mu_compatible(a, b)) continue;
                bool dom_disjoint = true;
                for (const auto& [k, v] : b)
                  if (a.count(k)) {
                    dom_disjoint = false;
                    break;
                  }
                if (!dom_disjoint) {
                  keep = false;
                  break;
                }
              }
              if (keep) out.push_back(a);
            }
            return out;
          },
          [&](const sparql::Filter& n) {
            std::vector<Mu> in = eval_list(n.child, g), out;
            for (const Mu& mu : in)
              if (cond_true(mu, n.cond)) out.push_back(mu);
            return out;
          },
          [&](const sparql::SelectP& n) {
            std::vector<Mu> in = eval_list(n.child, g), out;
            for (const Mu& mu : in) {
              Mu slim;
              for (const auto& [from, to] : n.renames) {
                auto it = mu.find(from.name);
                if (it != mu.end()) slim[to.name] = it->second;
              }
              for (const sparql::Var& keep : n.keep) {
                auto it = mu.find(keep.name);
                if (it != mu.end()) slim[keep.name] = it->second;
              }
              out.push_back(std::move(slim));
            }
            return out;
          }},
      p->node);
}

}  // namespace

std::vector<Mu> sparql_naive(const sparql::PatternPtr& p, const rdf::Graph& g) {
  if (!p) throw std::invalid_argument("sparql_naive: null pattern");
  return eval_list(p, g);
}

bool same_solutions(const std::vector<Mu>& a, const sparql::Solutions& b) {
  sparql::Solutions as(a.begin(), a.end());
  return as == b;
}

}  // namespace rdb2owl::oracle
