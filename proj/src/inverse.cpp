#include "rdb2owl/inverse.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rdb2owl/directmap.hpp"

namespace rdb2owl::inverse {

namespace {

using rdf::Graph;
using rdf::Term;
using rdf::Triple;
using relmodel::Database;
using relmodel::Relation;
using relmodel::Tuple;
using relmodel::Value;
using sparql::PatternPtr;
using sparql::Solutions;
using sparql::Var;

[[noreturn]] void fail(const std::string& msg) { throw RecoverError(msg); }

// Strip the base prefix from an IRI; anything else is not ours.
std::string local_name(const std::string& iri, const std::string& base) {
  if (iri.size() <= base.size() || iri.compare(0, base.size(), base) != 0)
    fail("IRI <" + iri + "> does not extend the base <" + base + ">");
  return iri.substr(base.size());
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(',', start);
    parts.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

// A recovered bridge relation: R with attributes (A, B), where A references
// attribute C of S and B references attribute D of T.
struct BridgeRelation {
  std::string rel, attr_a, attr_b;
  std::string target_s, ref_c, target_t, ref_d;
  Term property;
};

void check_recovered_name(const std::string& what, const std::string& name,
                          const std::string& iri) {
  if (!relmodel::valid_name(name))
    fail("unparsable " + what + " IRI <" + iri + ">: \"" + name + "\" is not a valid name");
}

// The unique object of (subject, pred, ·), which must exist and be an IRI.
const Term& required_iri_object(const Graph& g, const Term& subject, const Term& pred,
                                const std::string& what) {
  const Term* found = nullptr;
  for (const Triple& t : g) {
    if (!(t.subject == subject) || !(t.predicate == pred)) continue;
    if (found) fail(what + " of <" + subject.text() + "> is not unique");
    found = &t.object;
  }
  if (!found) fail("<" + subject.text() + "> lacks a " + what + " triple");
  if (!found->is_iri()) fail(what + " of <" + subject.text() + "> is not an IRI");
  return *found;
}

std::vector<Tuple> tuples_from_solutions(const Solutions& sols,
                                         const std::vector<std::string>& attrs) {
  std::vector<Tuple> tuples;
  size_t n = 1;
  for (const auto& mu : sols)
    tuples.push_back({"id" + std::to_string(n++), tr_inverse(mu, attrs)});
  return tuples;
}

}  // namespace

relmodel::Row tr_inverse(const sparql::SolutionMapping& mu,
                         const std::vector<std::string>& attrs) {
  relmodel::Row row;
  for (const std::string& a : attrs) {
    auto it = mu.find("?" + a);
    row[a] = it == mu.end() ? Value::null() : Value::of(it->second.text());
  }
  return row;
}

relmodel::Database recover_database(const rdf::Graph& g, const std::string& base) {
  const Term rdf_type = Term::iri(rdf::vocab::rdf_type);
  const Term rdfs_domain = Term::iri(rdf::vocab::rdfs_domain);
  const Term rdfs_range = Term::iri(rdf::vocab::rdfs_range);
  const Term owl_class = Term::iri(rdf::vocab::owl_class);
  const Term owl_dtp = Term::iri(rdf::vocab::owl_datatype_property);
  const Term owl_op = Term::iri(rdf::vocab::owl_object_property);

  // Step 1: class declarations name the non-bridge relations.
  std::set<std::string> classes;
  for (const Triple& t : g) {
    if (!(t.predicate == rdf_type) || !(t.object == owl_class)) continue;
    if (!t.subject.is_iri()) fail("class declaration with a non-IRI subject");
    std::string name = local_name(t.subject.text(), base);
    check_recovered_name("class", name, t.subject.text());
    classes.insert(name);
  }

  // Step 2: datatype properties carry the attributes of those relations.
  std::map<std::string, std::set<std::string>> class_attrs;
  for (const Triple& t : g) {
    if (!(t.predicate == rdf_type) || !(t.object == owl_dtp)) continue;
    if (!t.subject.is_iri()) fail("datatype-property declaration with a non-IRI subject");
    const std::string& iri = t.subject.text();
    std::string local = local_name(iri, base);
    size_t hash = local.find('#');
    if (hash == std::string::npos || hash == 0 || hash + 1 == local.size())
      fail("unparsable datatype-property IRI <" + iri + ">");
    std::string rel = local.substr(0, hash);
    std::string attr = local.substr(hash + 1);
    check_recovered_name("datatype-property", rel, iri);
    check_recovered_name("datatype-property", attr, iri);
    if (!classes.count(rel))
      fail("datatype property <" + iri + "> does not belong to any declared class");
    const Term& dom = required_iri_object(g, t.subject, rdfs_domain, "domain");
    if (!(dom == Term::iri(base + rel)))
      fail("datatype property <" + iri + "> has domain <" + dom.text() +
           ">, expected <" + base + rel + ">");
    class_attrs[rel].insert(attr);
  }
  for (const std::string& cls : classes)
    if (class_attrs[cls].empty())
      fail("class <" + base + cls + "> has no datatype properties; not a mapping image");

  // Step 4a: object properties with a comma-free path segment before '#'
  // declare bridge relations. Two path elements mean a plain foreign-key
  // property, which carries no rows of its own and is skipped.
  std::vector<BridgeRelation> bridges;
  std::set<std::string> bridge_names;
  for (const Triple& t : g) {
    if (!(t.predicate == rdf_type) || !(t.object == owl_op)) continue;
    if (!t.subject.is_iri()) fail("object-property declaration with a non-IRI subject");
    const std::string& iri = t.subject.text();
    std::string local = local_name(iri, base);
    size_t hash = local.find('#');
    if (hash == std::string::npos || hash == 0 || hash + 1 == local.size())
      fail("unparsable object-property IRI <" + iri + ">");
    std::vector<std::string> pre = split_commas(local.substr(0, hash));
    if (pre.size() == 2) continue;
    if (pre.size() != 1) fail("unparsable object-property IRI <" + iri + ">");

    BridgeRelation br;
    br.rel = pre[0];
    br.property = t.subject;
    check_recovered_name("object-property", br.rel, iri);
    std::vector<std::string> post = split_commas(local.substr(hash + 1));
    if (post.size() != 4) fail("unparsable object-property IRI <" + iri + ">");
    for (const std::string& part : post) check_recovered_name("object-property", part, iri);
    br.attr_a = post[0];
    br.attr_b = post[1];
    br.ref_c = post[2];
    br.ref_d = post[3];
    if (br.attr_a == br.attr_b)
      fail("object property <" + iri + "> repeats an attribute name");
    if (classes.count(br.rel))
      fail("<" + base + br.rel + "> is declared both as a class and as a bridge relation");
    if (!bridge_names.insert(br.rel).second)
      fail("two object properties declare the bridge relation " + br.rel);

    br.target_s = local_name(required_iri_object(g, t.subject, rdfs_domain, "domain").text(),
                             base);
    br.target_t = local_name(required_iri_object(g, t.subject, rdfs_range, "range").text(),
                             base);
    for (const std::string* target : {&br.target_s, &br.target_t})
      if (!classes.count(*target))
        fail("object property <" + iri + "> references <" + base + *target +
             ">, which is not a declared class");
    bridges.push_back(br);
  }

  Database out;
  out.base = base;

  // Step 3: read the rows of each class back through a nested-OPT query.
  for (const std::string& cls : classes) {
    std::vector<std::string> attrs(class_attrs[cls].begin(), class_attrs[cls].end());
    out.schema.relations.push_back({cls, attrs});

    Var row{"?__row"};
    PatternPtr p = sparql::triple_pattern(row, rdf_type, Term::iri(base + cls));
    std::vector<Var> keep;
    for (const std::string& a : attrs) {
      Var v{"?" + a};
      p = sparql::p_opt(p, sparql::triple_pattern(row, Term::iri(base + cls + "#" + a), v));
      keep.push_back(v);
    }
    Solutions sols = sparql::eval_pattern(sparql::p_select({}, keep, p), g);
    if (!sols.empty()) out.instance[cls] = tuples_from_solutions(sols, attrs);
  }

  // Steps 4b/5: read the rows of each bridge relation back through the
  // literals of the two referenced relations.
  std::sort(bridges.begin(), bridges.end(),
            [](const BridgeRelation& a, const BridgeRelation& b) { return a.rel < b.rel; });
  for (const BridgeRelation& br : bridges) {
    std::vector<std::string> attrs{br.attr_a, br.attr_b};
    std::sort(attrs.begin(), attrs.end());
    out.schema.relations.push_back({br.rel, attrs});

    Var s{"?__s"}, t{"?__t"}, va{"?" + br.attr_a}, vb{"?" + br.attr_b};
    PatternPtr p = sparql::p_and(
        sparql::p_and(
            sparql::triple_pattern(s, br.property, t),
            sparql::triple_pattern(s, Term::iri(base + br.target_s + "#" + br.ref_c), va)),
        sparql::triple_pattern(t, Term::iri(base + br.target_t + "#" + br.ref_d), vb));
    Solutions sols = sparql::eval_pattern(sparql::p_select({}, {va, vb}, p), g);
    if (!sols.empty()) out.instance[br.rel] = tuples_from_solutions(sols, attrs);
  }

  std::sort(out.schema.relations.begin(), out.schema.relations.end(),
            [](const Relation& a, const Relation& b) { return a.name < b.name; });
  return out;
}

}  // namespace rdb2owl::inverse
