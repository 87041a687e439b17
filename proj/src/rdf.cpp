#include "rdb2owl/rdf.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace rdb2owl::rdf {

bool is_consistent(const Graph& g) {
  for (const Triple& t : g) {
    if (t.predicate.is_iri() && t.predicate.text() == vocab::owl_different_from &&
        t.subject == t.object) {
      return false;
    }
  }
  return true;
}

bool graph_contained(const Graph& sub, const Graph& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

namespace {

std::string escape_literal(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

[[noreturn]] void fail(size_t line_no, const std::string& msg) {
  throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  size_t line_no;

  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  void skip_ws() {
    while (!done() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  Term parse_term() {
    if (done()) fail(line_no, "unexpected end of triple");
    char c = peek();
    if (c == '<') {
      size_t end = s.find('>', pos + 1);
      if (end == std::string::npos) fail(line_no, "unterminated IRI");
      std::string iri = s.substr(pos + 1, end - pos - 1);
      pos = end + 1;
      return Term::iri(iri);
    }
    if (c == '_') {
      if (pos + 1 >= s.size() || s[pos + 1] != ':') fail(line_no, "malformed blank node");
      size_t end = pos + 2;
      while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
      std::string label = s.substr(pos + 2, end - pos - 2);
      if (label.empty()) fail(line_no, "empty blank node label");
      pos = end;
      return Term::blank(label);
    }
    if (c == '"') {
      std::string value;
      ++pos;
      while (true) {
        if (done()) fail(line_no, "unterminated literal");
        char d = s[pos++];
        if (d == '"') break;
        if (d == '\\') {
          if (done()) fail(line_no, "dangling escape in literal");
          char e = s[pos++];
          switch (e) {
            case '"': value.push_back('"'); break;
            case '\\': value.push_back('\\'); break;
            case 'n': value.push_back('\n'); break;
            case 'r': value.push_back('\r'); break;
            case 't': value.push_back('\t'); break;
            default: fail(line_no, std::string("unsupported escape \\") + e);
          }
        } else {
          value.push_back(d);
        }
      }
      return Term::literal(value);
    }
    fail(line_no, std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

std::string term_to_ntriples(const Term& t) {
  switch (t.kind()) {
    case TermKind::Iri: return "<" + t.text() + ">";
    case TermKind::BlankNode: return "_:" + t.text();
    case TermKind::Literal: return "\"" + escape_literal(t.text()) + "\"";
  }
  return {};
}

std::string serialize_ntriples(const Graph& g) {
  std::vector<std::array<std::string, 3>> rows;
  rows.reserve(g.size());
  for (const Triple& t : g) {
    rows.push_back({term_to_ntriples(t.subject), term_to_ntriples(t.predicate),
                    term_to_ntriples(t.object)});
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& r : rows) {
    out += r[0];
    out += ' ';
    out += r[1];
    out += ' ';
    out += r[2];
    out += " .\n";
  }
  return out;
}

Graph parse_ntriples(const std::string& text) {
  Graph g;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Cursor cur{line, 0, line_no};
    cur.skip_ws();
    if (cur.done()) continue;  // blank line
    Triple t;
    t.subject = cur.parse_term();
    if (t.subject.is_literal()) fail(line_no, "literal subject not allowed");
    cur.skip_ws();
    t.predicate = cur.parse_term();
    if (!t.predicate.is_iri()) fail(line_no, "predicate must be an IRI");
    cur.skip_ws();
    t.object = cur.parse_term();
    cur.skip_ws();
    if (cur.done() || cur.peek() != '.') fail(line_no, "expected terminating '.'");
    ++cur.pos;
    cur.skip_ws();
    if (!cur.done()) fail(line_no, "trailing content after '.'");
    g.insert(std::move(t));
  }
  return g;
}

}  // namespace rdb2owl::rdf
