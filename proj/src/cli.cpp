#include "rdb2owl/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdb2owl/directmap.hpp"
#include "rdb2owl/inverse.hpp"
#include "rdb2owl/propcheck.hpp"
#include "rdb2owl/ra2sparql.hpp"
#include "rdb2owl/relalg.hpp"
#include "rdb2owl/relmodel.hpp"
#include "rdb2owl/sparql.hpp"

namespace rdb2owl::cli {

namespace {

using nlohmann::json;
using relmodel::Database;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsageError = 2;

struct InputOptions {
  std::string db_path;
  std::string base;     // --base override
  std::string csv_dir;  // read tuples from <dir>/<relation>.csv
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("db", in.db_path, "database document (JSON)")->required();
  cmd->add_option("--base", in.base, "base IRI (overrides the document and RDB2OWL_BASE)");
  cmd->add_option("--csv-dir", in.csv_dir,
                  "directory with one <relation>.csv per relation; the document then only "
                  "carries the schema");
}

// Base IRI precedence: --base flag, then the document, then RDB2OWL_BASE,
// then the built-in default.
Database load_input(const InputOptions& in, std::ostream& err) {
  std::ifstream f(in.db_path);
  if (!f) throw relmodel::LoadError("cannot open " + in.db_path);
  json doc;
  try {
    f >> doc;
  } catch (const json::exception& e) {
    throw relmodel::LoadError(in.db_path + ": invalid JSON: " + std::string(e.what()));
  }
  Database db = in.csv_dir.empty() ? relmodel::load_database(doc)
                                   : relmodel::load_csv_database(in.db_path, in.csv_dir);
  std::string base = in.base;
  if (base.empty() && (!doc.is_object() || !doc.contains("base"))) {
    if (const char* env = std::getenv("RDB2OWL_BASE"); env && *env) base = env;
  }
  if (!base.empty()) {
    if (base.find_first_of(" \t\n\r\"<>") != std::string::npos)
      throw relmodel::LoadError("base IRI contains characters not allowed in an IRI");
    db.base = base;
  }
  if (db.duplicate_rows_dropped > 0)
    err << "warning: dropped " << db.duplicate_rows_dropped << " duplicate row"
        << (db.duplicate_rows_dropped == 1 ? "" : "s") << '\n';
  return db;
}

directmap::Variant parse_variant(const std::string& name) {
  if (name == "dm") return directmap::Variant::Dm;
  if (name == "dm-pk") return directmap::Variant::DmPk;
  if (name == "dm-pk-fk") return directmap::Variant::DmPkFk;
  throw relmodel::LoadError("unknown variant \"" + name + "\" (expected dm, dm-pk or dm-pk-fk)");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw relmodel::LoadError("cannot write " + path);
  f << text;
}

// ---------------------------------------------------------------------------
// Subcommand actions
// ---------------------------------------------------------------------------

int run_map(const InputOptions& in, const std::string& variant, const std::string& output,
            const std::string& trace_path, std::ostream& out, std::ostream& err) {
  Database db = load_input(in, err);
  directmap::MapResult result = directmap::direct_map_traced(db, parse_variant(variant));
  std::string text = rdf::serialize_ntriples(result.graph);
  if (output.empty())
    out << text;
  else
    write_file(output, text);
  if (!trace_path.empty()) {
    std::ostringstream trace;
    for (const auto& [triple, rules] : result.trace) {
      trace << rdf::term_to_ntriples(triple.subject) << ' '
            << rdf::term_to_ntriples(triple.predicate) << ' '
            << rdf::term_to_ntriples(triple.object) << " .\t";
      bool first = true;
      for (const std::string& rule : rules) {
        if (!first) trace << ',';
        trace << rule;
        first = false;
      }
      trace << '\n';
    }
    write_file(trace_path, trace.str());
  }
  return kOk;
}

int run_check(const InputOptions& in, std::ostream& out, std::ostream& err) {
  Database db = load_input(in, err);
  relmodel::SatisfiesResult res = relmodel::satisfies(db);
  if (res.holds) {
    out << "satisfied\n";
    return kOk;
  }
  out << "violated (" << res.violations.size() << ")\n";
  for (const relmodel::Violation& v : res.violations) out << v.description << '\n';
  return kCheckFailed;
}

int run_compile_query(const InputOptions& in, const std::string& query_text,
                      const std::string& ast_path, size_t cap, std::ostream& out,
                      std::ostream& err) {
  Database db = load_input(in, err);
  relalg::ExprPtr q = relalg::parse_query(query_text, db.schema);
  ra2sparql::TranslateOptions opts;
  opts.difference_arity_cap = cap;
  sparql::PatternPtr p = ra2sparql::translate(q, db, opts);
  out << sparql::serialize_query(p) << '\n';
  if (!ast_path.empty()) write_file(ast_path, sparql::pattern_to_json(p).dump(2) + "\n");
  return kOk;
}

int run_query(const InputOptions& in, const std::string& query_text, const std::string& variant,
              bool as_json, std::ostream& out, std::ostream& err) {
  Database db = load_input(in, err);
  relalg::ExprPtr q = relalg::parse_query(query_text, db.schema);
  sparql::PatternPtr p = ra2sparql::translate(q, db);
  rdf::Graph g = directmap::direct_map(db, parse_variant(variant));
  sparql::Solutions sols = sparql::eval_pattern(p, g);
  if (as_json) {
    out << sparql::solutions_to_json(sols).dump(2) << '\n';
    return kOk;
  }
  std::set<std::string> vars;
  for (const auto& mu : sols)
    for (const auto& [v, t] : mu) vars.insert(v);
  bool first = true;
  for (const std::string& v : vars) {
    if (!first) out << '\t';
    out << v;
    first = false;
  }
  out << '\n';
  for (const auto& mu : sols) {
    first = true;
    for (const std::string& v : vars) {
      if (!first) out << '\t';
      auto it = mu.find(v);
      out << (it == mu.end() ? std::string("-") : rdf::term_to_ntriples(it->second));
      first = false;
    }
    out << '\n';
  }
  return kOk;
}

bool same_database_shape(const Database& a, const Database& b) {
  if (a.schema.relations.size() != b.schema.relations.size()) return false;
  for (const relmodel::Relation& rel : a.schema.relations) {
    const relmodel::Relation* other = b.schema.find(rel.name);
    if (!other) return false;
    if (std::set<std::string>(rel.attributes.begin(), rel.attributes.end()) !=
        std::set<std::string>(other->attributes.begin(), other->attributes.end()))
      return false;
  }
  return relmodel::instance_contained(a.instance, b.instance) &&
         relmodel::instance_contained(b.instance, a.instance);
}

int run_roundtrip(const InputOptions& in, const std::string& variant, std::ostream& out,
                  std::ostream& err) {
  Database db = load_input(in, err);
  rdf::Graph g = directmap::direct_map(db, parse_variant(variant));
  Database rec = inverse::recover_database(g, db.base);
  out << relmodel::serialize_database(rec).dump(2) << '\n';
  if (same_database_shape(db, rec)) {
    err << "roundtrip: recovered database matches the input\n";
    return kOk;
  }
  err << "roundtrip: recovered database differs from the input\n";
  return kCheckFailed;
}

int run_verify(const std::string& db_path, bool random_db, uint64_t seed,
               const std::string& property, const std::string& variant_name, long trials,
               size_t depth, bool as_json, const InputOptions& base_opts, std::ostream& out,
               std::ostream& err) {
  if (db_path.empty() == !random_db)
    throw relmodel::LoadError("verify needs exactly one of <db> or --random");
  std::optional<Database> fixed;
  if (!db_path.empty()) {
    InputOptions in = base_opts;
    in.db_path = db_path;
    fixed = load_input(in, err);
  }
  propcheck::GeneratorParams params;
  params.seed = seed;
  directmap::Variant variant = parse_variant(variant_name);
  const Database* fixed_ptr = fixed ? &*fixed : nullptr;

  propcheck::PropertyReport report;
  if (property == "info") {
    report = propcheck::check_information_preservation(params, trials > 0 ? trials : 200,
                                                       fixed_ptr);
  } else if (property == "query") {
    report = propcheck::check_query_preservation(params, depth, trials > 0 ? trials : 300,
                                                 fixed_ptr);
  } else if (property == "mono") {
    report = propcheck::check_monotonicity(params, variant, trials > 0 ? trials : 200,
                                           fixed_ptr);
  } else if (property == "sem") {
    report = propcheck::check_semantics_preservation(params, variant,
                                                     trials > 0 ? trials : 400, fixed_ptr);
  } else {
    throw relmodel::LoadError("unknown property \"" + property +
                              "\" (expected info, query, mono or sem)");
  }
  if (as_json)
    out << report.to_json().dump(2) << '\n';
  else
    out << report.to_text();
  return report.passed() ? kOk : kCheckFailed;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"direct mapping of relational databases to RDF graphs"};
  app.require_subcommand(1);

  const std::string variant_help = "mapping variant: dm, dm-pk or dm-pk-fk";

  InputOptions map_in;
  std::string map_variant = "dm", map_output, map_trace;
  CLI::App* map_cmd = app.add_subcommand("map", "translate a database into an RDF graph");
  add_input_options(map_cmd, map_in);
  map_cmd->add_option("--variant", map_variant, variant_help);
  map_cmd->add_option("-o,--output", map_output, "write N-Triples here instead of stdout");
  map_cmd->add_option("--trace", map_trace, "write a per-triple rule-provenance sidecar");

  InputOptions check_in;
  CLI::App* check_cmd = app.add_subcommand("check", "verify keys and references");
  add_input_options(check_cmd, check_in);

  InputOptions compile_in;
  std::string compile_query_text, compile_ast;
  size_t compile_cap = ra2sparql::TranslateOptions{}.difference_arity_cap;
  CLI::App* compile_cmd =
      app.add_subcommand("compile-query", "compile an algebra query into a graph pattern");
  add_input_options(compile_cmd, compile_in);
  compile_cmd->add_option("query", compile_query_text, "algebra query text")->required();
  compile_cmd->add_option("--ast-json", compile_ast, "also write the pattern as JSON here");
  compile_cmd->add_option("--difference-cap", compile_cap,
                          "largest attribute set allowed under a difference");

  InputOptions query_in;
  std::string query_text, query_variant = "dm";
  bool query_json = false;
  CLI::App* query_cmd =
      app.add_subcommand("query", "run an algebra query through its compiled pattern");
  add_input_options(query_cmd, query_in);
  query_cmd->add_option("query", query_text, "algebra query text")->required();
  query_cmd->add_option("--variant", query_variant, variant_help);
  query_cmd->add_flag("--json", query_json, "print solution mappings as JSON");

  InputOptions roundtrip_in;
  std::string roundtrip_variant = "dm";
  CLI::App* roundtrip_cmd =
      app.add_subcommand("roundtrip", "map, recover, and compare against the input");
  add_input_options(roundtrip_cmd, roundtrip_in);
  roundtrip_cmd->add_option("--variant", roundtrip_variant, variant_help);

  std::string verify_db, verify_property, verify_variant = "dm";
  bool verify_random = false, verify_json = false;
  uint64_t verify_seed = 1;
  long verify_trials = -1;
  size_t verify_depth = 2;
  InputOptions verify_base;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run a mapping property check");
  verify_cmd->add_option("db", verify_db, "database document (JSON)");
  verify_cmd->add_flag("--random", verify_random, "use seeded random databases instead");
  verify_cmd->add_option("--seed", verify_seed, "random seed");
  verify_cmd
      ->add_option("--property", verify_property, "property: info, query, mono or sem")
      ->required();
  verify_cmd->add_option("--variant", verify_variant, variant_help);
  verify_cmd->add_option("--trials", verify_trials, "trial count (default per property)");
  verify_cmd->add_option("--depth", verify_depth, "maximum random query depth");
  verify_cmd->add_flag("--json", verify_json, "print the report as JSON");
  verify_cmd->add_option("--base", verify_base.base,
                         "base IRI (overrides the document and RDB2OWL_BASE)");
  verify_cmd->add_option("--csv-dir", verify_base.csv_dir,
                         "directory with one <relation>.csv per relation");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (map_cmd->parsed())
      return run_map(map_in, map_variant, map_output, map_trace, out, err);
    if (check_cmd->parsed()) return run_check(check_in, out, err);
    if (compile_cmd->parsed())
      return run_compile_query(compile_in, compile_query_text, compile_ast, compile_cap, out,
                               err);
    if (query_cmd->parsed())
      return run_query(query_in, query_text, query_variant, query_json, out, err);
    if (roundtrip_cmd->parsed())
      return run_roundtrip(roundtrip_in, roundtrip_variant, out, err);
    if (verify_cmd->parsed())
      return run_verify(verify_db, verify_random, verify_seed, verify_property, verify_variant,
                        verify_trials, verify_depth, verify_json, verify_base, out, err);
    err << "error: no subcommand given\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

}  // namespace rdb2owl::cli
