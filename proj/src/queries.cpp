#include "bonsai/queries.hpp"

#include <chrono>
#include <json.hpp>

namespace bonsai::queries {

using langs::LangDef;
using langs::Outcome;

int QueryConfig::effective_depth() const {
  return depth >= 0 ? depth : langs::lang(language).table_depth;
}
int QueryConfig::effective_fuel() const {
  return fuel >= 0 ? fuel : langs::lang(language).table_fuel;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

SolverConfig solver_for(const QueryConfig& cfg) {
  SolverConfig s = cfg.solver;
  s.timeout_ms = cfg.timeout_ms;
  s.emit_path = cfg.emit_smt_path;
  return s;
}

Counterexample decode_witness(const LangDef& def, const langs::QueryParts& parts,
                              const Model& m) {
  Counterexample ce;
  ce.tree = parts.decode(m);
  if (!ce.tree) throw ReplayMismatch("model decoded to a failure value");
  ce.program = render_sexpr(ce.tree, def.grammar.encoding());
  ce.size = redex_size(ce.tree, def.grammar.encoding());
  return ce;
}

} // namespace

QueryResult soundness_query(const QueryConfig& cfg) {
  const LangDef& def = langs::lang(cfg.language);
  langs::check_bug_id(def, cfg.bug);
  int depth = cfg.effective_depth();
  int fuel = cfg.effective_fuel();

  Session s;
  auto t0 = std::chrono::steady_clock::now();
  langs::QueryParts parts = def.build(s, depth, fuel, cfg.bug, cfg.encoding);

  std::vector<Formula> hard = {parts.syntax, parts.typed, s.mk_not(parts.exec_ok),
                               s.mk_not(parts.out_of_fuel)};
  std::optional<IntExpr> objective;
  if (cfg.minimize) {
    if (!parts.size)
      throw langs::LangError("minimization needs the bonsai encoding's size objective");
    objective = parts.size;
  }
  Goal goal = Goal::over(s, hard, objective);

  QueryResult out;
  out.kind = "soundness";
  out.eval_ms = ms_since(t0);

  SolveResult r = cfg.minimize ? minimize(goal, solver_for(cfg)) : solve(goal, solver_for(cfg));
  out.status = r.status;
  out.solve_ms = r.solve_ms;
  out.solver_calls = r.solver_calls;
  out.emitted_nodes = r.emitted_nodes;
  out.unknown_optimality = r.unknown_optimality;
  if (r.status != Status::Sat) return out;

  Counterexample ce = decode_witness(def, parts, r.model);
  langs::ConcreteRun run = def.run_concrete(ce.tree, fuel, cfg.bug);
  ce.replay_confirmed = run.typechecks && run.outcome == Outcome::Fail;
  ce.replay_note = std::string(run.typechecks ? "typechecks" : "rejected") + ", " +
                   (run.outcome == Outcome::Ok
                        ? "runs clean"
                        : run.outcome == Outcome::Fail ? "fails" : "out of fuel");
  if (!ce.replay_confirmed)
    throw ReplayMismatch("soundness witness failed concrete replay (" + ce.replay_note +
                         "): " + ce.program);
  out.witness = std::move(ce);
  return out;
}

QueryResult diff_query(const QueryConfig& cfg) {
  const LangDef& def = langs::lang(cfg.language);
  langs::check_bug_id(def, cfg.bug_a);
  langs::check_bug_id(def, cfg.bug_b);
  if (!def.build_diff) throw langs::LangError("language has no diff builder");
  int depth = cfg.effective_depth();

  Session s;
  auto t0 = std::chrono::steady_clock::now();
  langs::DiffParts parts = def.build_diff(s, depth, cfg.bug_a, cfg.bug_b);

  std::vector<Formula> hard = {parts.syntax, parts.typed_a, s.mk_not(parts.typed_b)};
  std::optional<IntExpr> objective;
  if (cfg.minimize) objective = parts.size;
  Goal goal = Goal::over(s, hard, objective);

  QueryResult out;
  out.kind = "diff";
  out.eval_ms = ms_since(t0);

  SolveResult r = cfg.minimize ? minimize(goal, solver_for(cfg)) : solve(goal, solver_for(cfg));
  out.status = r.status;
  out.solve_ms = r.solve_ms;
  out.solver_calls = r.solver_calls;
  out.emitted_nodes = r.emitted_nodes;
  out.unknown_optimality = r.unknown_optimality;
  if (r.status != Status::Sat) return out;

  Counterexample ce;
  ce.tree = parts.decode(r.model);
  if (!ce.tree) throw ReplayMismatch("model decoded to a failure value");
  ce.program = render_sexpr(ce.tree, def.grammar.encoding());
  ce.size = redex_size(ce.tree, def.grammar.encoding());
  bool acc_a = def.run_concrete(ce.tree, cfg.effective_fuel(), cfg.bug_a).typechecks;
  bool acc_b = def.run_concrete(ce.tree, cfg.effective_fuel(), cfg.bug_b).typechecks;
  ce.replay_confirmed = acc_a && !acc_b;
  ce.replay_note = std::string(acc_a ? "accepted by a" : "rejected by a") + ", " +
                   (acc_b ? "accepted by b" : "rejected by b");
  if (!ce.replay_confirmed)
    throw ReplayMismatch("diff witness failed concrete replay (" + ce.replay_note +
                         "): " + ce.program);
  out.witness = std::move(ce);
  return out;
}

Verdict verify_witness(const QueryConfig& cfg, const std::string& kind,
                       const std::string& program_text) {
  const LangDef& def = langs::lang(cfg.language);
  CTreePtr tree;
  try {
    auto vocab = def.grammar.vocabulary();
    tree = embed_sexpr(program_text, def.grammar.encoding(), &vocab);
  } catch (const std::exception&) {
    return Verdict::Invalid;
  }
  if (kind == "soundness") {
    langs::ConcreteRun run = def.run_concrete(tree, cfg.effective_fuel(), cfg.bug);
    return run.typechecks && run.outcome == Outcome::Fail ? Verdict::Confirmed
                                                          : Verdict::Rejected;
  }
  bool acc_a = def.run_concrete(tree, cfg.effective_fuel(), cfg.bug_a).typechecks;
  bool acc_b = def.run_concrete(tree, cfg.effective_fuel(), cfg.bug_b).typechecks;
  return acc_a && !acc_b ? Verdict::Confirmed : Verdict::Rejected;
}

std::string to_json(const QueryConfig& cfg, const QueryResult& r) {
  nlohmann::json j;
  j["query"] = r.kind;
  j["lang"] = cfg.language;
  j["encoding"] = cfg.encoding;
  j["depth"] = cfg.effective_depth();
  j["fuel"] = cfg.effective_fuel();
  if (r.kind == "diff") {
    j["check_a"] = cfg.bug_a.empty() ? "none" : cfg.bug_a;
    j["check_b"] = cfg.bug_b.empty() ? "none" : cfg.bug_b;
  } else {
    j["bug"] = cfg.bug.empty() ? "none" : cfg.bug;
  }
  j["minimize"] = cfg.minimize;
  j["solver_status"] = r.status == Status::Sat     ? "sat"
                       : r.status == Status::Unsat ? "unsat"
                                                   : "unknown";
  j["time_ms"] = r.eval_ms + r.solve_ms;
  j["eval_ms"] = r.eval_ms;
  j["solve_ms"] = r.solve_ms;
  j["solver_calls"] = r.solver_calls;
  if (r.unknown_optimality) j["unknown_optimality"] = true;
  if (r.witness) {
    j["program"] = r.witness->program;
    j["size"] = r.witness->size;
    j["replay"] = r.witness->replay_note;
    j["replay_confirmed"] = r.witness->replay_confirmed;
  } else {
    j["program"] = nullptr;
    j["size"] = nullptr;
    j["replay"] = nullptr;
  }
  return j.dump(2);
}

} // namespace bonsai::queries
