#pragma once

#include "bonsai/langs.hpp"
#include "bonsai/smt.hpp"

namespace bonsai::queries {

// A witness that failed its concrete replay: an engine bug, never a result.
struct ReplayMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QueryConfig {
  std::string language = "arith";
  std::string encoding = "bonsai";
  int depth = -1; // negative: language default
  int fuel = -1;
  std::string bug;          // soundness query
  std::string bug_a, bug_b; // diff query: accepted by a, rejected by b
  bool minimize = false;
  int timeout_ms = 0;
  std::string emit_smt_path;
  SolverConfig solver = SolverConfig::from_env();

  int effective_depth() const;
  int effective_fuel() const;
};

struct Counterexample {
  std::string program; // rendered s-expression
  CTreePtr tree;
  size_t size = 0;
  bool replay_confirmed = false;
  std::string replay_note;
};

struct QueryResult {
  std::string kind; // soundness | diff
  Status status = Status::Unknown;
  std::optional<Counterexample> witness;
  double eval_ms = 0;
  double solve_ms = 0;
  int solver_calls = 0;
  size_t emitted_nodes = 0;
  bool unknown_optimality = false;
};

// S and T and not ok and not out-of-fuel; any witness must replay as
// typechecks-and-fails or the query aborts with ReplayMismatch.
QueryResult soundness_query(const QueryConfig& cfg);

// S and T_a and not T_b; any witness must replay as accepted-by-a and
// rejected-by-b.
QueryResult diff_query(const QueryConfig& cfg);

enum class Verdict { Confirmed, Rejected, Invalid };

// Re-checks a rendered witness against its query predicate from scratch.
Verdict verify_witness(const QueryConfig& cfg, const std::string& kind,
                       const std::string& program_text);

std::string to_json(const QueryConfig& cfg, const QueryResult& r);

} // namespace bonsai::queries
