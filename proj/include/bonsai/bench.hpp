#pragma once

#include "bonsai/queries.hpp"

#include <iosfwd>

namespace bonsai::bench {

// One benchmark trial row; times are wall-clock, with symbolic evaluation
// and solving reported separately.
struct TrialRow {
  std::string encoding;
  std::string lang;
  std::string bug;
  int depth = 0;
  int fuel = 0;
  double eval_ms = 0;
  double solve_ms = 0;
  std::string status; // sat | unsat | unknown | timeout | error
  long size = -1;     // witness size, -1 when none
  BigInt count_trees; // syntactically valid ASTs within the trial's depth
};

std::string csv_header();
std::string csv_row(const TrialRow& r);

struct ScalingOptions {
  std::string lang = "fv";
  int min_depth = 1;
  int max_depth = 30;
  int fuel = 4;
  double budget_ms = 60000; // per-trial budget; a deeper trial is not tried
                            // after the budget is exceeded
  std::vector<std::string> encodings = {"bonsai", "classic"};
  int timeout_ms = 0;
  int jobs = 1;
};

// Deepening runs of the free-variable benchmark per encoding; every trial is
// the unsat soundness query. Returns all completed trial rows.
std::vector<TrialRow> bench_scaling(const ScalingOptions& opt, std::ostream& log);

struct BugTrial {
  TrialRow row;
  bool minimized = false;
  long published_size = -1;   // source-table witness size for context
  double published_secs = -1; // source-table time for context
  bool found = false;
};

struct BugsuiteOptions {
  bool minimize_pass = true; // also run each bug with minimization
  int timeout_ms = 300000;   // per bug
  int jobs = 1;
};

// All nine stlc bugs plus the arithmetic if-branch bug; rows carry the
// published reference numbers alongside the measured ones. Throws when a bug
// yields no witness within its timeout.
std::vector<BugTrial> bench_bugsuite(const BugsuiteOptions& opt, std::ostream& log);

// Per-bug query depths that cover the known minimal witnesses.
int bug_query_depth(const std::string& bug);

} // namespace bonsai::bench
