#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdb2owl/directmap.hpp"
#include "rdb2owl/relalg.hpp"
#include "rdb2owl/relmodel.hpp"

namespace rdb2owl::propcheck {

// SplitMix64. The standard <random> distributions are implementation
// defined, which would break seed-stable reports across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next();
  size_t below(size_t n);  // uniform in [0, n); 0 when n == 0
  bool chance(double p);
  Rng fork() { return Rng(next()); }

 private:
  uint64_t state_;
};

struct GeneratorParams {
  uint64_t seed = 1;
  size_t max_relations = 5;
  size_t max_attributes = 5;  // per relation, capped at the 8-name pool
  size_t max_rows = 8;
  double null_probability = 0.2;
  double pk_probability = 0.6;   // chance a relation declares a key
  double fk_density = 0.3;       // chance an ordered relation pair gets a foreign key
  bool constraint_satisfying = false;  // repair the instance until it satisfies
};

struct Counterexample {
  std::string description;
  nlohmann::json database;  // serialized database (the minimized one)
  std::string query;        // textual algebra query, "" when not applicable
  nlohmann::json expected;
  nlohmann::json actual;
};

struct PropertyReport {
  std::string property;
  std::string variant;
  size_t trials = 0;
  std::vector<Counterexample> failures;  // empty iff the property held
  std::map<std::string, size_t> coverage;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const { return failures.empty(); }
  nlohmann::json to_json() const;
  std::string to_text() const;
};

std::string variant_name(directmap::Variant v);

// Random database over relations R1..Rn: random attribute lists from an
// eight-name pool, values v0..v9, NULLs per null_probability, keys per
// pk_probability, foreign keys (always onto a full declared key) per
// fk_density, plus an occasional two-attribute bridge relation. With
// constraint_satisfying the instance is repaired first by dropping key-
// violating rows, then by inserting referenced rows, and finally by
// dropping rows that still dangle. Deterministic in the seed.
relmodel::Database gen_random_database(const GeneratorParams& p);
relmodel::Database gen_random_database(Rng& rng, const GeneratorParams& p);

// Random well-formed algebra query over the database's schema. Weights:
// base 40%, selection 20%, join 15%, projection/rename 15%, union 5%,
// difference 5% (difference operands are projected down to at most three
// attributes first).
relalg::ExprPtr gen_random_query(Rng& rng, const relmodel::Database& db, size_t max_depth);

// Tally which translation cases a query exercises (base-class vs
// base-bridge, each selection kind, each operator, shared vs disjoint
// join) into `coverage`.
void record_query_coverage(const relalg::ExprPtr& q, const relmodel::Database& db,
                           std::map<std::string, size_t>& coverage);

// Greedily shrink a failing database: drop tuples one at a time, then whole
// relations, keeping every step on which `fails` still returns true.
relmodel::Database minimize_database(relmodel::Database db,
                                     const std::function<bool(const relmodel::Database&)>& fails,
                                     size_t budget = 400);

// Mapping a satisfying instance and recovering it returns the same schema
// (as name -> attribute set) and the same instance (as value sets).
PropertyReport check_information_preservation(const GeneratorParams& p, size_t trials = 200,
                                              const relmodel::Database* fixed_db = nullptr);

// Compiled patterns over the mapped graph return exactly the converted
// relational answers. Trials open with a fixed slate of queries covering
// every translation case, then continue randomly up to max_depth.
PropertyReport check_query_preservation(const GeneratorParams& p, size_t max_depth = 2,
                                        size_t trials = 300,
                                        const relmodel::Database* fixed_db = nullptr);

// Graphs of sub-instances are sub-graphs. For the key+reference-checking
// variant the expectation flips: the check searches for (and constructs) a
// witness that containment breaks, and fails only if none can be produced.
PropertyReport check_monotonicity(const GeneratorParams& p, directmap::Variant variant,
                                  size_t trials = 200,
                                  const relmodel::Database* fixed_db = nullptr);

// Graph consistency mirrors constraint satisfaction: the plain variant is
// always consistent; the key-checking variant matches the verdict on
// key-only constraint sets (its blindness to dangling references is
// documented in the report details); the full variant matches it always.
PropertyReport check_semantics_preservation(const GeneratorParams& p, directmap::Variant variant,
                                            size_t trials = 400,
                                            const relmodel::Database* fixed_db = nullptr);

}  // namespace rdb2owl::propcheck
