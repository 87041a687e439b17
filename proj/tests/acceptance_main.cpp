// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "rdb2owl/directmap.hpp"
#include "rdb2owl/inverse.hpp"
#include "rdb2owl/propcheck.hpp"
#include "rdb2owl/ra2sparql.hpp"
#include "rdb2owl/relalg.hpp"
#include "rdb2owl/relmodel.hpp"
#include "rdb2owl/sparql.hpp"

using namespace rdb2owl;
using nlohmann::json;
using rdf::Graph;
using rdf::Term;
using rdf::Triple;
using relmodel::Database;

namespace {

const std::string kDataDir = RDB2OWL_TEST_DATA_DIR;
const std::string kBase = "http://example.edu/db/";

struct Outcome {
  bool ok;
  std::string detail;
};

struct CriterionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw CriterionFailure(what);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Database load_fixture(const std::string& name) {
  return relmodel::load_database_file(kDataDir + "/" + name);
}

// Dangling-reference witness: R1's single row points at R2.B, which is empty
// (dangling) or holds the matching row (repaired).
Database reference_witness(bool dangling) {
  json doc = {
      {"relations",
       json::array(
           {json{{"name", "R1"},
                 {"attributes", json::array({"A"})},
                 {"tuples", json::array({json::array({"x"})})}},
            json{{"name", "R2"},
                 {"attributes", json::array({"B"})},
                 {"tuples",
                  dangling ? json::array() : json::array({json::array({"x"})})}}})},
      {"constraints",
       json{{"primary_keys",
             json::array({json{{"relation", "R2"}, {"attributes", json::array({"B"})}}})},
            {"foreign_keys",
             json::array({json{{"relation", "R1"},
                               {"attributes", json::array({"A"})},
                               {"ref_relation", "R2"},
                               {"ref_attributes", json::array({"B"})}}})}}}};
  return relmodel::load_database(doc);
}

// Patterns produced while checking criteria 3 and 5, re-examined by 9.
std::vector<sparql::PatternPtr> collected_patterns;

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Database db = load_fixture("example2.json");
  Graph g = directmap::direct_map(db, directmap::Variant::Dm);
  require(rdf::serialize_ntriples(g) == slurp(kDataDir + "/golden/student_dup_pk_dm.nt"),
          "serialization differs from the frozen golden file");

  const Term type = Term::iri(rdf::vocab::rdf_type);
  const Term domain = Term::iri(rdf::vocab::rdfs_domain);
  const Term owl_class = Term::iri(rdf::vocab::owl_class);
  const Term owl_dtp = Term::iri(rdf::vocab::owl_datatype_property);
  const Term student = Term::iri(kBase + "STUDENT");
  const Term sid = Term::iri(kBase + "STUDENT#SID");
  const Term name = Term::iri(kBase + "STUDENT#NAME");
  const Term row = Term::iri(kBase + "STUDENT#SID=1");
  const std::vector<Triple> reference_triples{
      {student, type, owl_class},
      {sid, type, owl_dtp},
      {name, type, owl_dtp},
      {sid, domain, student},
      {name, domain, student},
      {row, sid, Term::literal("1")},
      {row, name, Term::literal("John")},
      {row, name, Term::literal("Peter")},
  };
  for (const Triple& t : reference_triples)
    require(g.count(t) == 1, "missing reference triple with subject " + t.subject.text());
  require(g.size() == reference_triples.size() + 1,
          "graph holds " + std::to_string(g.size()) + " triples, expected the 8 reference "
          "triples plus the row-typing triple");
  require(g.count({row, type, student}) == 1, "the extra triple is not the row typing");
  require(rdf::is_consistent(g), "graph is inconsistent under the plain variant");
  return {true,
          "frozen graph matches byte-for-byte: all 8 reference triples plus the row-typing "
          "triple; consistent"};
}

Outcome criterion2() {
  Database db = load_fixture("university.json");
  directmap::Ontology onto = directmap::extract_ontology(db.schema, db.constraints);

  require(onto.classes == std::set<std::string>{"COURSE", "DEPT", "STUDENT"},
          "classes are not exactly {STUDENT, COURSE, DEPT}");
  const directmap::BinaryRelation enrolled{"ENROLLED", "SID", "CID", "STUDENT",
                                           "SID",      "COURSE", "CID"};
  require(onto.binary_relations == std::vector<directmap::BinaryRelation>{enrolled},
          "ENROLLED is not the single recognized binary relation");

  const directmap::ObjectProperty bridge_prop{directmap::PropertyOrigin::FromBinRel,
                                              "ENROLLED", {"SID", "CID"}, {"SID", "CID"},
                                              "STUDENT",  "COURSE"};
  const directmap::ObjectProperty fk_prop{
      directmap::PropertyOrigin::FromFk, "COURSE", {"CODE"}, {"DID"}, "COURSE", "DEPT"};
  require(onto.object_properties.size() == 2, "expected exactly two object properties");
  for (const auto& expected : {bridge_prop, fk_prop}) {
    bool found = false;
    for (const auto& op : onto.object_properties)
      if (op == expected) found = true;
    require(found, "object property for " + expected.rel + " missing or wrong");
  }

  // Datatype properties: every attribute of every class relation, only those.
  Graph g = directmap::direct_map(db);
  std::set<std::string> declared;
  for (const Triple& t : g)
    if (t.predicate == Term::iri(rdf::vocab::rdf_type) &&
        t.object == Term::iri(rdf::vocab::owl_datatype_property))
      declared.insert(t.subject.text());
  std::set<std::string> expected_dtps;
  for (const std::string& rel : {"STUDENT", "COURSE", "DEPT"})
    for (const std::string& attr : db.schema.get(rel).attributes)
      expected_dtps.insert(kBase + rel + "#" + attr);
  require(declared == expected_dtps,
          "datatype-property declarations do not cover exactly the class attributes");

  struct Example {
    std::string got, want;
  };
  const std::vector<Example> iris{
      {directmap::class_iri(kBase, "STUDENT"), kBase + "STUDENT"},
      {directmap::data_property_iri(kBase, "STUDENT", "NAME"), kBase + "STUDENT#NAME"},
      {directmap::binrel_property_iri(kBase, enrolled), kBase + "ENROLLED#SID,CID,SID,CID"},
      {directmap::fk_property_iri(kBase, "COURSE", "DEPT", {"CODE"}, {"DID"}),
       kBase + "COURSE,DEPT#CODE,DID"},
      {directmap::row_iri(kBase, "STUDENT", {"SID"}, {"1"}), kBase + "STUDENT#SID=1"},
  };
  for (const Example& e : iris)
    require(e.got == e.want, "IRI mismatch: got " + e.got + ", want " + e.want);
  return {true,
          "classes, binary relation, object properties, datatype properties, and all "
          "five example IRIs match"};
}

Outcome criterion3() {
  Database db = load_fixture("university.json");
  struct Entry {
    std::string query, stem;
  };
  const std::vector<Entry> entries{
      {"STUDENT", "query_student"},
      {"ENROLLED", "query_enrolled"},
      {"select(NAME=Juan, STUDENT)", "query_select_name"},
      {"join(select(NAME=Juan, STUDENT), ENROLLED)", "query_join"},
  };
  for (const Entry& e : entries) {
    relalg::ExprPtr q = relalg::parse_query(e.query, db.schema);
    sparql::PatternPtr p = ra2sparql::translate(q, db);
    collected_patterns.push_back(p);

    std::string golden_rq = slurp(kDataDir + "/golden/" + e.stem + ".rq");
    while (!golden_rq.empty() && golden_rq.back() == '\n') golden_rq.pop_back();
    require(sparql::serialize_query(p) == golden_rq,
            e.query + ": serialization differs from the frozen form");
    require(sparql::pattern_to_json(p) ==
                json::parse(slurp(kDataDir + "/golden/" + e.stem + ".ast.json")),
            e.query + ": pattern AST differs from the golden file");
  }
  return {true, "all 4 reference translations match their frozen AST and serialization"};
}

Outcome criterion4() {
  propcheck::GeneratorParams p;  // defaults: <=5 relations, <=5 attrs, <=8 rows, 20% NULLs
  p.seed = 42001;
  p.constraint_satisfying = true;
  propcheck::PropertyReport rep = propcheck::check_information_preservation(p, 200);
  require(rep.trials == 200, "expected 200 trials");
  if (!rep.passed())
    return {false, std::to_string(200 - rep.failures.size()) + "/200; first failure: " +
                       rep.failures.front().description};
  return {true, "200/200 satisfying databases recovered exactly from their graphs"};
}

Outcome criterion5() {
  propcheck::GeneratorParams params;
  params.constraint_satisfying = true;
  propcheck::Rng master(52001);
  size_t equal = 0, oracle_checked = 0, oracle_equal = 0;
  std::map<std::string, size_t> coverage;
  std::string first_failure;

  const size_t trials = 300;
  for (size_t i = 0; i < trials; ++i) {
    propcheck::Rng r = master.fork();
    Database db = propcheck::gen_random_database(r, params);
    relalg::ExprPtr q = propcheck::gen_random_query(r, db, 4);
    propcheck::record_query_coverage(q, db, coverage);

    sparql::PatternPtr p = ra2sparql::translate(q, db);
    collected_patterns.push_back(p);
    Graph g = directmap::direct_map(db);
    relalg::ResultSet answers = relalg::eval(q, db);
    sparql::Solutions got = sparql::eval_pattern(p, g);
    if (got == ra2sparql::tr_result(answers)) {
      ++equal;
    } else if (first_failure.empty()) {
      first_failure = "trial " + std::to_string(i) + ": " + relalg::to_text(q);
    }

    if (i < 100) {
      ++oracle_checked;
      bool rel_ok = oracle::same_table(oracle::to_table(answers), oracle::eval_naive(q, db));
      bool pat_ok = oracle::same_solutions(oracle::sparql_naive(p, g), got);
      if (rel_ok && pat_ok)
        ++oracle_equal;
      else if (first_failure.empty())
        first_failure = "trial " + std::to_string(i) + " oracle disagreement (" +
                        std::string(rel_ok ? "pattern" : "algebra") + "): " +
                        relalg::to_text(q);
    }
  }
  if (equal != trials || oracle_equal != oracle_checked)
    return {false, std::to_string(equal) + "/300 equalities, " +
                       std::to_string(oracle_equal) + "/" + std::to_string(oracle_checked) +
                       " oracle cross-checks; " + first_failure};
  return {true, "300/300 mapping-set equalities; 100/100 oracle cross-checks; " +
                    std::to_string(coverage.size()) + " translation cases exercised"};
}

Outcome criterion6() {
  propcheck::GeneratorParams p;
  p.seed = 62001;
  propcheck::PropertyReport rep =
      propcheck::check_monotonicity(p, directmap::Variant::Dm, 200);
  require(rep.trials == 200, "expected 200 pairs");
  if (!rep.passed())
    return {false, "plain-variant containment failed: " + rep.failures.front().description};

  Database i1 = reference_witness(true);
  Database i2 = reference_witness(false);
  require(relmodel::instance_contained(i1.instance, i2.instance),
          "witness instances are not nested");
  Graph g1 = directmap::direct_map(i1, directmap::Variant::DmPkFk);
  Graph g2 = directmap::direct_map(i2, directmap::Variant::DmPkFk);
  const Term viol = Term::iri(directmap::violation_iri(i1.base));
  const Triple viol_triple{viol, Term::iri(rdf::vocab::owl_different_from), viol};
  require(g1.count(viol_triple) == 1, "violation triple missing for the dangling instance");
  require(g2.count(viol_triple) == 0, "violation triple still present after repair");
  require(!rdf::graph_contained(g1, g2), "witness graphs are unexpectedly contained");
  return {true, "200/200 containments for the plain variant; dangling-reference witness "
                "breaks containment for the checking variant"};
}

Outcome criterion7() {
  propcheck::GeneratorParams params;  // mixed databases: no repair
  propcheck::Rng master(72001);
  const size_t trials = 400;
  size_t dm_consistent = 0, pk_agree = 0, pkfk_agree = 0, satisfied = 0, violating = 0;
  for (size_t i = 0; i < trials; ++i) {
    propcheck::Rng r = master.fork();
    Database db = propcheck::gen_random_database(r, params);
    bool sat = oracle::satisfies_naive(db);
    ++(sat ? satisfied : violating);

    if (rdf::is_consistent(directmap::direct_map(db, directmap::Variant::Dm)))
      ++dm_consistent;

    Database keys_only = db;
    keys_only.constraints.foreign_keys.clear();
    bool keys_sat = oracle::satisfies_naive(keys_only);
    if (rdf::is_consistent(directmap::direct_map(keys_only, directmap::Variant::DmPk)) ==
        keys_sat)
      ++pk_agree;

    if (rdf::is_consistent(directmap::direct_map(db, directmap::Variant::DmPkFk)) == sat)
      ++pkfk_agree;
  }
  require(satisfied > 0 && violating > 0, "trial mix is vacuous");
  require(dm_consistent == trials,
          std::to_string(dm_consistent) + "/400 plain graphs consistent");
  require(pk_agree == trials,
          std::to_string(pk_agree) + "/400 key-variant agreements on key-only constraints");
  require(pkfk_agree == trials,
          std::to_string(pkfk_agree) + "/400 full-variant agreements");

  Database gap = reference_witness(true);
  require(!oracle::satisfies_naive(gap), "gap witness unexpectedly satisfies");
  require(rdf::is_consistent(directmap::direct_map(gap, directmap::Variant::DmPk)),
          "key-checking variant flagged a dangling reference it cannot see");
  return {true, "400/400 on all three variants (" + std::to_string(satisfied) +
                    " satisfying / " + std::to_string(violating) +
                    " violating); key-variant blindness to dangling references confirmed"};
}

Outcome criterion8() {
  propcheck::GeneratorParams params;
  propcheck::Rng master(82001);
  size_t pairs = 0, equal = 0, attempts = 0;
  std::string first_failure;
  while (pairs < 200 && attempts < 2000) {
    ++attempts;
    propcheck::Rng r = master.fork();
    Database db = propcheck::gen_random_database(r, params);

    std::vector<std::pair<std::string, std::string>> candidates;
    for (const relmodel::Relation& a : db.schema.relations)
      for (const relmodel::Relation& b : db.schema.relations) {
        bool share = false;
        for (const std::string& attr : a.attributes)
          for (const std::string& other : b.attributes)
            if (attr == other) share = true;
        if (share) candidates.emplace_back(a.name, b.name);
      }
    if (candidates.empty()) continue;
    const auto& [lhs_name, rhs_name] = candidates[r.below(candidates.size())];
    relalg::ExprPtr lhs = relalg::base(lhs_name), rhs = relalg::base(rhs_name);

    relalg::ExprPtr loj = relalg::desugar_left_outer_join(lhs, rhs, db.schema);
    oracle::Table got = oracle::to_table(relalg::eval(loj, db));
    oracle::Table want = oracle::left_outer_join_naive(
        oracle::to_table(relalg::eval(lhs, db)), oracle::to_table(relalg::eval(rhs, db)));
    ++pairs;
    if (oracle::same_table(got, want))
      ++equal;
    else if (first_failure.empty())
      first_failure = lhs_name + " louter " + rhs_name + " (attempt " +
                      std::to_string(attempts) + ")";
  }
  require(pairs == 200, "only " + std::to_string(pairs) + " shared-attribute pairs found");
  if (equal != pairs)
    return {false, std::to_string(equal) + "/200; first mismatch: " + first_failure};
  return {true, "200/200 desugared left outer joins equal the nested-loop oracle"};
}

Outcome criterion9() {
  require(collected_patterns.size() == 304,
          "expected 304 patterns from criteria 3 and 5, have " +
              std::to_string(collected_patterns.size()));
  size_t parametric = 0;
  for (const sparql::PatternPtr& p : collected_patterns)
    if (!sparql::is_non_parametric(p)) ++parametric;
  if (parametric > 0)
    return {false, std::to_string(parametric) + " of 304 patterns are parametric"};
  return {true, "all 304 patterns from criteria 3 and 5 are non-parametric"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  bool all_ok = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    std::cout << "CRITERION " << (i + 1) << ": " << (o.ok ? "PASS" : "FAIL") << " - "
              << o.detail << std::endl;
    all_ok = all_ok && o.ok;
  }
  return all_ok ? 0 : 1;
}
