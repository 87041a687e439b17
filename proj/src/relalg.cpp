#include "rdb2owl/relalg.hpp"

#include <algorithm>
#include <cctype>

namespace rdb2owl::relalg {

using relmodel::Row;
using relmodel::Value;

ExprPtr base(std::string name) {
  return std::make_shared<Expr>(Expr{BaseRelation{std::move(name)}});
}
ExprPtr nullrel(std::string attr) {
  return std::make_shared<Expr>(Expr{NullRel{std::move(attr)}});
}
ExprPtr select(SelCondition cond, ExprPtr child) {
  return std::make_shared<Expr>(Expr{Select{std::move(cond), std::move(child)}});
}
ExprPtr project(std::vector<std::string> attrs, ExprPtr child) {
  std::sort(attrs.begin(), attrs.end());
  attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
  return std::make_shared<Expr>(Expr{Project{std::move(attrs), std::move(child)}});
}
ExprPtr rename(std::string from, std::string to, ExprPtr child) {
  return std::make_shared<Expr>(Expr{Rename{std::move(from), std::move(to), std::move(child)}});
}
ExprPtr join(ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr{Join{std::move(l), std::move(r)}});
}
ExprPtr set_union(ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr{Union{std::move(l), std::move(r)}});
}
ExprPtr difference(ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr{Difference{std::move(l), std::move(r)}});
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string attr_set_text(const std::set<std::string>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ",";
    out += a;
    first = false;
  }
  return out + "}";
}

}  // namespace

std::set<std::string> attributes(const ExprPtr& e, const relmodel::Schema& schema) {
  if (!e) throw IllFormed("null expression");
  return std::visit(
      overloaded{
          [&](const BaseRelation& b) {
            const relmodel::Relation* rel = schema.find(b.name);
            if (!rel) throw IllFormed("unknown relation " + b.name);
            return std::set<std::string>(rel->attributes.begin(), rel->attributes.end());
          },
          [&](const NullRel& n) {
            if (n.attr.empty()) throw IllFormed("null relation needs an attribute name");
            return std::set<std::string>{n.attr};
          },
          [&](const Select& s) {
            auto atts = attributes(s.child, schema);
            if (!atts.count(s.cond.attr))
              throw IllFormed("selection on " + s.cond.attr + " but the operand has attributes " +
                              attr_set_text(atts));
            return atts;
          },
          [&](const Project& p) {
            auto atts = attributes(p.child, schema);
            if (p.attrs.empty()) throw IllFormed("projection needs a nonempty attribute set");
            for (const auto& a : p.attrs)
              if (!atts.count(a))
                throw IllFormed("projection keeps " + a + " but the operand has attributes " +
                                attr_set_text(atts));
            return std::set<std::string>(p.attrs.begin(), p.attrs.end());
          },
          [&](const Rename& r) {
            auto atts = attributes(r.child, schema);
            if (!atts.count(r.from))
              throw IllFormed("rename of " + r.from + " but the operand has attributes " +
                              attr_set_text(atts));
            if (atts.count(r.to))
              throw IllFormed("rename target " + r.to + " already occurs in the operand");
            atts.erase(r.from);
            atts.insert(r.to);
            return atts;
          },
          [&](const Join& j) {
            auto l = attributes(j.left, schema);
            auto r = attributes(j.right, schema);
            l.insert(r.begin(), r.end());
            return l;
          },
          [&](const Union& u) {
            auto l = attributes(u.left, schema);
            auto r = attributes(u.right, schema);
            if (l != r)
              throw IllFormed("union operands have different attributes: " + attr_set_text(l) +
                              " vs " + attr_set_text(r));
            return l;
          },
          [&](const Difference& d) {
            auto l = attributes(d.left, schema);
            auto r = attributes(d.right, schema);
            if (l != r)
              throw IllFormed("difference operands have different attributes: " +
                              attr_set_text(l) + " vs " + attr_set_text(r));
            return l;
          }},
      e->node);
}

namespace {

ResultSet eval_impl(const ExprPtr& e, const relmodel::Database& db) {
  return std::visit(
      overloaded{
          [&](const BaseRelation& b) {
            ResultSet rs;
            const relmodel::Relation& rel = db.schema.get(b.name);
            rs.attrs = std::set<std::string>(rel.attributes.begin(), rel.attributes.end());
            auto it = db.instance.find(b.name);
            if (it != db.instance.end())
              for (const auto& t : it->second) rs.rows.insert(t.values);
            return rs;
          },
          [&](const NullRel& n) {
            ResultSet rs;
            rs.attrs = {n.attr};
            Row row;
            row[n.attr] = Value::null();
            rs.rows.insert(std::move(row));
            return rs;
          },
          [&](const Select& s) {
            ResultSet in = eval_impl(s.child, db);
            ResultSet rs;
            rs.attrs = in.attrs;
            for (const Row& row : in.rows) {
              const Value& v = row.at(s.cond.attr);
              bool keep = false;
              switch (s.cond.kind) {
                case SelKind::Eq: keep = !v.is_null() && v.text() == s.cond.constant; break;
                case SelKind::Neq: keep = !v.is_null() && v.text() != s.cond.constant; break;
                case SelKind::IsNull: keep = v.is_null(); break;
                case SelKind::IsNotNull: keep = !v.is_null(); break;
              }
              if (keep) rs.rows.insert(row);
            }
            return rs;
          },
          [&](const Project& p) {
            ResultSet in = eval_impl(p.child, db);
            ResultSet rs;
            rs.attrs = std::set<std::string>(p.attrs.begin(), p.attrs.end());
            for (const Row& row : in.rows) {
              Row out;
              for (const auto& a : p.attrs) out[a] = row.at(a);
              rs.rows.insert(std::move(out));
            }
            return rs;
          },
          [&](const Rename& r) {
            ResultSet in = eval_impl(r.child, db);
            ResultSet rs;
            rs.attrs = in.attrs;
            rs.attrs.erase(r.from);
            rs.attrs.insert(r.to);
            for (const Row& row : in.rows) {
              Row out = row;
              auto node = out.extract(r.from);
              node.key() = r.to;
              out.insert(std::move(node));
              rs.rows.insert(std::move(out));
            }
            return rs;
          },
          [&](const Join& j) {
            ResultSet l = eval_impl(j.left, db);
            ResultSet r = eval_impl(j.right, db);
            std::vector<std::string> shared;
            std::set_intersection(l.attrs.begin(), l.attrs.end(), r.attrs.begin(), r.attrs.end(),
                                  std::back_inserter(shared));
            ResultSet rs;
            rs.attrs = l.attrs;
            rs.attrs.insert(r.attrs.begin(), r.attrs.end());
            for (const Row& a : l.rows) {
              for (const Row& b : r.rows) {
                bool match = true;
                for (const auto& s : shared) {
                  const Value& va = a.at(s);
                  const Value& vb = b.at(s);
                  // NULL never matches, not even NULL = NULL.
                  if (va.is_null() || vb.is_null() || !(va == vb)) {
                    match = false;
                    break;
                  }
                }
                if (!match) continue;
                Row out = a;
                for (const auto& [k, v] : b) out[k] = v;
                rs.rows.insert(std::move(out));
              }
            }
            return rs;
          },
          [&](const Union& u) {
            ResultSet l = eval_impl(u.left, db);
            ResultSet r = eval_impl(u.right, db);
            l.rows.insert(r.rows.begin(), r.rows.end());
            return l;
          },
          [&](const Difference& d) {
            ResultSet l = eval_impl(d.left, db);
            ResultSet r = eval_impl(d.right, db);
            ResultSet rs;
            rs.attrs = l.attrs;
            for (const Row& row : l.rows)
              if (!r.rows.count(row)) rs.rows.insert(row);
            return rs;
          }},
      e->node);
}

}  // namespace

ResultSet eval(const ExprPtr& e, const relmodel::Database& db) {
  attributes(e, db.schema);  // validates the whole tree up front
  return eval_impl(e, db);
}

ExprPtr desugar_left_outer_join(const ExprPtr& lhs, const ExprPtr& rhs,
                                const relmodel::Schema& schema) {
  std::set<std::string> la = attributes(lhs, schema);
  std::set<std::string> ra = attributes(rhs, schema);
  std::vector<std::string> shared;
  std::set_intersection(la.begin(), la.end(), ra.begin(), ra.end(), std::back_inserter(shared));
  if (shared.empty())
    throw IllFormed("outer join requires at least one shared attribute");
  std::vector<std::string> rhs_only;
  std::set_difference(ra.begin(), ra.end(), la.begin(), la.end(), std::back_inserter(rhs_only));

  // Rows of lhs that can never match: some shared attribute is NULL.
  ExprPtr unmatched;
  for (const auto& a : shared) {
    ExprPtr part = select({SelKind::IsNull, a, ""}, lhs);
    unmatched = unmatched ? set_union(unmatched, part) : part;
  }
  // ... or all shared attributes are non-NULL but their combination does not
  // occur among the rhs rows.
  ExprPtr key_diff = project(shared, lhs);
  for (auto it = shared.rbegin(); it != shared.rend(); ++it)
    key_diff = select({SelKind::IsNotNull, *it, ""}, key_diff);
  key_diff = difference(key_diff, project(shared, rhs));
  unmatched = set_union(unmatched, join(lhs, key_diff));

  // Pad the unmatched rows with NULLs on the rhs-only attributes.
  ExprPtr pad;
  for (const auto& b : rhs_only) {
    ExprPtr n = nullrel(b);
    pad = pad ? join(pad, n) : n;
  }
  if (pad) unmatched = join(unmatched, pad);

  return set_union(join(lhs, rhs), unmatched);
}

ExprPtr desugar_right_outer_join(const ExprPtr& lhs, const ExprPtr& rhs,
                                 const relmodel::Schema& schema) {
  return desugar_left_outer_join(rhs, lhs, schema);
}

ExprPtr desugar_full_outer_join(const ExprPtr& lhs, const ExprPtr& rhs,
                                const relmodel::Schema& schema) {
  return set_union(desugar_left_outer_join(lhs, rhs, schema),
                   desugar_right_outer_join(lhs, rhs, schema));
}

namespace {

struct Parser {
  const std::string& text;
  const relmodel::Schema& schema;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("at offset " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':' ||
           c == '+' || c == '-';
  }

  std::string name_token() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && name_char(text[pos])) {
      // "->" is the rename arrow, never part of a name.
      if (text[pos] == '-' && pos + 1 < text.size() && text[pos + 1] == '>') break;
      ++pos;
    }
    if (pos == start) fail("expected a name");
    return text.substr(start, pos - start);
  }

  // A constant: bare token or a double-quoted string with \" and \\ escapes.
  std::string value_token() {
    skip_ws();
    if (pos < text.size() && text[pos] == '"') {
      ++pos;
      std::string out;
      while (true) {
        if (pos >= text.size()) fail("unterminated quoted value");
        char c = text[pos++];
        if (c == '"') return out;
        if (c == '\\') {
          if (pos >= text.size()) fail("dangling escape in quoted value");
          char e = text[pos++];
          if (e == '"' || e == '\\')
            out.push_back(e);
          else if (e == 'n')
            out.push_back('\n');
          else
            fail(std::string("unsupported escape \\") + e);
        } else {
          out.push_back(c);
        }
      }
    }
    size_t start = pos;
    while (pos < text.size() && text[pos] != ',' && text[pos] != ')' &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) fail("expected a value");
    return text.substr(start, pos - start);
  }

  SelCondition condition() {
    if (peek_keyword("isnull")) {
      name_token();
      expect('(');
      std::string a = name_token();
      expect(')');
      return {SelKind::IsNull, a, ""};
    }
    if (peek_keyword("isnotnull")) {
      name_token();
      expect('(');
      std::string a = name_token();
      expect(')');
      return {SelKind::IsNotNull, a, ""};
    }
    std::string a = name_token();
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == '!' && text[pos + 1] == '=') {
      pos += 2;
      return {SelKind::Neq, a, value_token()};
    }
    expect('=');
    return {SelKind::Eq, a, value_token()};
  }

  bool peek_keyword(const std::string& kw) {
    skip_ws();
    if (text.compare(pos, kw.size(), kw) != 0) return false;
    size_t after = pos + kw.size();
    if (after < text.size() && name_char(text[after])) return false;
    // Operators are always followed by '('; a bare name is a relation.
    size_t p = after;
    while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
    return p < text.size() && text[p] == '(';
  }

  ExprPtr expr() {
    skip_ws();
    if (peek_keyword("select")) {
      name_token();
      expect('(');
      SelCondition c = condition();
      expect(',');
      ExprPtr child = expr();
      expect(')');
      return select(std::move(c), std::move(child));
    }
    if (peek_keyword("project")) {
      name_token();
      expect('(');
      expect('{');
      std::vector<std::string> attrs;
      if (!eat('}')) {
        attrs.push_back(name_token());
        while (eat(',')) attrs.push_back(name_token());
        expect('}');
      }
      expect(',');
      ExprPtr child = expr();
      expect(')');
      return project(std::move(attrs), std::move(child));
    }
    if (peek_keyword("rename")) {
      name_token();
      expect('(');
      std::string from = name_token();
      skip_ws();
      if (pos + 1 >= text.size() || text[pos] != '-' || text[pos + 1] != '>')
        fail("expected '->' in rename");
      pos += 2;
      std::string to = name_token();
      expect(',');
      ExprPtr child = expr();
      expect(')');
      return rename(std::move(from), std::move(to), std::move(child));
    }
    if (peek_keyword("nullrel")) {
      name_token();
      expect('(');
      std::string a = name_token();
      expect(')');
      return nullrel(std::move(a));
    }
    for (const char* kw : {"join", "union", "diff", "louter", "router", "fouter"}) {
      if (peek_keyword(kw)) {
        std::string op = name_token();
        expect('(');
        ExprPtr l = expr();
        expect(',');
        ExprPtr r = expr();
        expect(')');
        if (op == "join") return join(std::move(l), std::move(r));
        if (op == "union") return set_union(std::move(l), std::move(r));
        if (op == "diff") return difference(std::move(l), std::move(r));
        if (op == "louter") return desugar_left_outer_join(l, r, schema);
        if (op == "router") return desugar_right_outer_join(l, r, schema);
        return desugar_full_outer_join(l, r, schema);
      }
    }
    return base(name_token());
  }
};

bool needs_quoting(const std::string& v) {
  if (v.empty()) return true;
  for (char c : v)
    if (!Parser::name_char(c)) return true;
  return false;
}

std::string render_value(const std::string& v) {
  if (!needs_quoting(v)) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

ExprPtr parse_query(const std::string& text, const relmodel::Schema& schema) {
  Parser p{text, schema};
  ExprPtr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing content after query");
  attributes(e, schema);  // surface ill-formedness immediately
  return e;
}

std::string to_text(const ExprPtr& e) {
  return std::visit(
      overloaded{
          [&](const BaseRelation& b) { return b.name; },
          [&](const NullRel& n) { return "nullrel(" + n.attr + ")"; },
          [&](const Select& s) {
            std::string cond;
            switch (s.cond.kind) {
              case SelKind::Eq: cond = s.cond.attr + "=" + render_value(s.cond.constant); break;
              case SelKind::Neq: cond = s.cond.attr + "!=" + render_value(s.cond.constant); break;
              case SelKind::IsNull: cond = "isnull(" + s.cond.attr + ")"; break;
              case SelKind::IsNotNull: cond = "isnotnull(" + s.cond.attr + ")"; break;
            }
            return "select(" + cond + ", " + to_text(s.child) + ")";
          },
          [&](const Project& p) {
            std::string attrs;
            for (size_t i = 0; i < p.attrs.size(); ++i) {
              if (i) attrs += ",";
              attrs += p.attrs[i];
            }
            return "project({" + attrs + "}, " + to_text(p.child) + ")";
          },
          [&](const Rename& r) {
            return "rename(" + r.from + "->" + r.to + ", " + to_text(r.child) + ")";
          },
          [&](const Join& j) { return "join(" + to_text(j.left) + ", " + to_text(j.right) + ")"; },
          [&](const Union& u) {
            return "union(" + to_text(u.left) + ", " + to_text(u.right) + ")";
          },
          [&](const Difference& d) {
            return "diff(" + to_text(d.left) + ", " + to_text(d.right) + ")";
          }},
      e->node);
}

}  // namespace rdb2owl::relalg
