#pragma once

#include "bonsai/encoding.hpp"

#include <functional>
#include <optional>
#include <string>

namespace bonsai::langs {

struct LangError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Outcome { Ok, Fail, OutOfFuel };

// Concrete replay of a program through the non-symbolic twins.
struct ConcreteRun {
  bool typechecks = false;
  Outcome outcome = Outcome::Ok;
  std::string detail; // rendered result value or failure note
};

// The per-query formula sets of one symbolic evaluation: the program value
// is shared, each phase runs in its own context.
struct QueryParts {
  Formula syntax;      // S: the program is grammatical
  Formula typed;       // T: every typechecker assertion holds
  Formula exec_ok;     // ok: every interpreter assertion holds
  Formula out_of_fuel; // some path exhausted the recursion bound
  std::optional<IntExpr> size; // minimization objective (bonsai encoding only)
  std::function<CTreePtr(const Model&)> decode;
  std::vector<SymConstId> program_consts;
  ValPtr program_tree; // bonsai encoding only; null for classic
};

// Like QueryParts but with two typecheckers over one shared program.
struct DiffParts {
  Formula syntax;
  Formula typed_a;
  Formula typed_b;
  std::optional<IntExpr> size;
  std::function<CTreePtr(const Model&)> decode;
};

struct LangDef {
  std::string name;
  Grammar grammar;
  int table_depth; // published query parameters
  int table_fuel;  // 0 when the interpreter needs no bound
  std::vector<std::string> bug_ids;
  bool classic_supported = false;

  std::function<QueryParts(Session&, int depth, int fuel, const std::string& bug,
                           const std::string& encoding)>
      build;
  std::function<DiffParts(Session&, int depth, const std::string& bug_a,
                          const std::string& bug_b)>
      build_diff;
  std::function<ConcreteRun(const CTreePtr&, int fuel, const std::string& bug)> run_concrete;
};

const LangDef& lang(const std::string& name);
std::vector<std::string> lang_names();

// Validates a bug id for a language ("none" and "" mean no bug).
void check_bug_id(const LangDef& l, const std::string& bug);

} // namespace bonsai::langs
