#pragma once

#include "bonsai/formula.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bonsai {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver goal: hard constraints plus an optional minimization objective.
// Constants are collected from the formulas; a finite-domain constant is
// emitted as a bounded integer (its domain index) with a range assertion.
struct Goal {
  Session* session = nullptr;
  std::vector<SymConstId> constants;
  std::vector<Formula> hard;
  std::optional<IntExpr> objective;       // minimized when present
  std::optional<int64_t> objective_bound; // extra constraint objective <= bound

  static Goal over(Session& s, std::vector<Formula> hard,
                   std::optional<IntExpr> objective = std::nullopt);
};

enum class Status { Sat, Unsat, Unknown };

struct SolveResult {
  Status status = Status::Unknown;
  Model model;        // total over the goal's constants when Sat
  double solve_ms = 0;
  size_t emitted_nodes = 0;
  size_t emitted_bytes = 0;
  int solver_calls = 0;
  bool unknown_optimality = false; // minimize ran out of time mid-descent
  std::optional<int64_t> objective_value;
};

struct SolverConfig {
  // Config key smt.solver: the solver binary, invoked as
  //   <solver> <file.smt2> [timeout_ms]
  // Default comes from $BONSAI_SMT_SOLVER, falling back to "z3".
  std::string solver;
  int timeout_ms = 0;
  std::string emit_path; // also write each emitted goal here when non-empty

  static SolverConfig from_env();
};

// Deterministic SMT-LIB 2 text for a goal (logic QF_LIA); byte-identical
// across emissions of the same goal.
std::string emit_smtlib(const Goal& goal);

SolveResult solve(const Goal& goal, const SolverConfig& cfg);

// Finds a model, then repeatedly re-solves with objective <= incumbent - 1
// until unsat; the returned model is objective-minimal. A timeout during the
// descent returns the incumbent flagged unknown_optimality.
SolveResult minimize(const Goal& goal, const SolverConfig& cfg);

} // namespace bonsai
