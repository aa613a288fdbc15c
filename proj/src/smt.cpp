#include "bonsai/smt.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>
#include <unordered_set>

namespace bonsai {

Goal Goal::over(Session& s, std::vector<Formula> hard, std::optional<IntExpr> objective) {
  Goal g;
  g.session = &s;
  g.hard = std::move(hard);
  g.objective = objective;
  for (Formula f : g.hard) s.collect_consts(f, g.constants);
  if (g.objective) s.collect_consts(*g.objective, g.constants);
  std::sort(g.constants.begin(), g.constants.end());
  return g;
}

SolverConfig SolverConfig::from_env() {
  SolverConfig cfg;
  const char* env = std::getenv("BONSAI_SMT_SOLVER");
  cfg.solver = env && *env ? env : "z3";
  return cfg;
}

namespace {

void mark_formula(const Session& s, Formula f, std::vector<uint8_t>& fneed) {
  std::vector<uint32_t> stack{f.id};
  while (!stack.empty()) {
    uint32_t id = stack.back();
    stack.pop_back();
    if (fneed[id]) continue;
    fneed[id] = 1;
    for (Formula c : s.fchildren(Formula{id})) stack.push_back(c.id);
  }
}

void mark_int(const Session& s, IntExpr e, std::vector<uint8_t>& ineed,
              std::vector<uint8_t>& fneed) {
  std::vector<uint32_t> stack{e.id};
  while (!stack.empty()) {
    uint32_t id = stack.back();
    stack.pop_back();
    if (ineed[id]) continue;
    ineed[id] = 1;
    IntExpr cur{id};
    if (s.ikind(cur) == IKind::Ite) mark_formula(s, s.int_cond(cur), fneed);
    for (IntExpr c : s.ichildren(cur)) stack.push_back(c.id);
  }
}

} // namespace

std::string emit_smtlib(const Goal& goal) {
  const Session& s = *goal.session;
  std::ostringstream out;
  out << "(set-logic QF_LIA)\n";

  for (SymConstId c : goal.constants) {
    size_t n = s.domain(c).size();
    out << "(declare-const c" << c << " Int)\n";
    out << "(assert (and (<= 0 c" << c << ") (< c" << c << " " << n << ")))\n";
  }

  std::vector<uint8_t> fneed(s.num_formulas(), 0);
  std::vector<uint8_t> ineed(s.num_intexprs(), 0);
  for (Formula f : goal.hard) mark_formula(s, f, fneed);
  if (goal.objective) mark_int(s, *goal.objective, ineed, fneed);

  auto fref = [&](Formula f) -> std::string {
    if (f.id == 0) return "true";
    if (f.id == 1) return "false";
    return "f" + std::to_string(f.id);
  };
  auto iref = [&](IntExpr e) { return "i" + std::to_string(e.id); };

  // children always have smaller ids, so ascending id order is topological
  for (uint32_t id = 2; id < s.num_formulas(); id++) {
    if (!fneed[id]) continue;
    Formula f{id};
    out << "(define-fun f" << id << " () Bool ";
    switch (s.fkind(f)) {
      case FKind::Eq: {
        auto idx = s.domain_index(s.eq_const(f), s.eq_atom(f));
        out << "(= c" << s.eq_const(f) << " " << *idx << ")";
        break;
      }
      case FKind::Not:
        out << "(not " << fref(s.fchildren(f)[0]) << ")";
        break;
      case FKind::Implies:
        out << "(=> " << fref(s.fchildren(f)[0]) << " " << fref(s.fchildren(f)[1]) << ")";
        break;
      case FKind::And:
      case FKind::Or: {
        out << (s.fkind(f) == FKind::And ? "(and" : "(or");
        for (Formula c : s.fchildren(f)) out << " " << fref(c);
        out << ")";
        break;
      }
      default:
        throw SolverError("unexpected formula node in emission");
    }
    out << ")\n";
  }

  for (uint32_t id = 0; id < s.num_intexprs(); id++) {
    if (!ineed[id]) continue;
    IntExpr e{id};
    out << "(define-fun i" << id << " () Int ";
    switch (s.ikind(e)) {
      case IKind::Const:
        out << s.int_value(e);
        break;
      case IKind::Ite:
        out << "(ite " << fref(s.int_cond(e)) << " " << iref(s.ichildren(e)[0]) << " "
            << iref(s.ichildren(e)[1]) << ")";
        break;
      case IKind::Sum: {
        out << "(+";
        for (IntExpr c : s.ichildren(e)) out << " " << iref(c);
        out << ")";
        break;
      }
    }
    out << ")\n";
  }

  for (Formula f : goal.hard) out << "(assert " << fref(f) << ")\n";
  if (goal.objective && goal.objective_bound)
    out << "(assert (<= " << iref(*goal.objective) << " " << *goal.objective_bound << "))\n";

  out << "(check-sat)\n";
  if (!goal.constants.empty()) {
    out << "(get-value (";
    bool first = true;
    for (SymConstId c : goal.constants) {
      if (!first) out << " ";
      first = false;
      out << "c" << c;
    }
    out << "))\n";
  }
  return out.str();
}

namespace {

std::string run_process(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw SolverError("could not start solver process: " + cmd);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  int rc = pclose(pipe);
  if (rc == -1) throw SolverError("solver process vanished: " + cmd);
  return out;
}

// Parses the (get-value (c...)) response: a sequence of (cN V) pairs.
Model parse_model(const Session& s, const Goal& goal, const std::string& text) {
  Model m;
  size_t pos = 0;
  while ((pos = text.find("(c", pos)) != std::string::npos) {
    pos += 2;
    size_t idend = pos;
    while (idend < text.size() && isdigit(static_cast<unsigned char>(text[idend]))) idend++;
    if (idend == pos) continue; // not a constant reference
    SymConstId cid = static_cast<SymConstId>(std::stoul(text.substr(pos, idend - pos)));
    size_t vpos = idend;
    while (vpos < text.size() && isspace(static_cast<unsigned char>(text[vpos]))) vpos++;
    size_t vend = vpos;
    if (vend < text.size() && text[vend] == '-') vend++;
    while (vend < text.size() && isdigit(static_cast<unsigned char>(text[vend]))) vend++;
    if (vend == vpos) continue; // not a value pair
    if (vend >= text.size() || text[vend] != ')') {
      pos = vend;
      continue;
    }
    long v = std::stol(text.substr(vpos, vend - vpos));
    if (cid < s.num_consts() && v >= 0 && static_cast<size_t>(v) < s.domain(cid).size())
      m.set(cid, s.domain(cid)[static_cast<size_t>(v)]);
    pos = vend;
  }
  size_t missing = 0;
  for (SymConstId c : goal.constants)
    if (!m.get(c)) missing++;
  // a handful of absent constants would be unconstrained ones; wholesale
  // absence means the response was not a value listing at all
  if (!goal.constants.empty() && missing == goal.constants.size())
    throw SolverError("solver reported sat but returned no model values");
  for (SymConstId c : goal.constants)
    if (!m.get(c)) m.set(c, s.domain(c)[0]);
  return m;
}

int temp_counter = 0;

} // namespace

SolveResult solve(const Goal& goal, const SolverConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::string text = emit_smtlib(goal);

  std::string path = "/tmp/bonsai-goal-" + std::to_string(getpid()) + "-" +
                     std::to_string(temp_counter++) + ".smt2";
  {
    std::ofstream f(path);
    f << text;
  }
  if (!cfg.emit_path.empty()) {
    std::ofstream f(cfg.emit_path);
    f << text;
  }

  std::string cmd = cfg.solver + " " + path;
  if (cfg.timeout_ms > 0) cmd += " " + std::to_string(cfg.timeout_ms);
  cmd += " 2>&1";
  std::string out = run_process(cmd);
  std::remove(path.c_str());

  SolveResult r;
  r.solver_calls = 1;
  r.emitted_bytes = text.size();
  {
    size_t nodes = 0;
    for (size_t p = 0; (p = text.find("define-fun", p)) != std::string::npos; p += 10) nodes++;
    r.emitted_nodes = nodes;
  }

  std::istringstream lines(out);
  std::string line, status;
  while (std::getline(lines, line)) {
    if (line == "sat" || line == "unsat" || line == "unknown" || line == "timeout") {
      status = line;
      break;
    }
  }
  if (status == "sat") {
    r.status = Status::Sat;
    r.model = parse_model(*goal.session, goal, out);
    if (goal.objective)
      r.objective_value = goal.session->eval_int(*goal.objective, r.model);
  } else if (status == "unsat") {
    r.status = Status::Unsat;
  } else if (status == "unknown" || status == "timeout") {
    r.status = Status::Unknown;
  } else {
    throw SolverError("solver produced no status line; output was:\n" + out.substr(0, 2000));
  }
  r.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                   .count();
  return r;
}

SolveResult minimize(const Goal& goal, const SolverConfig& cfg) {
  if (!goal.objective) throw SolverError("minimize needs a goal with an objective");
  SolveResult best = solve(goal, cfg);
  if (best.status != Status::Sat) return best;

  Goal bounded = goal;
  while (true) {
    int64_t k = goal.session->eval_int(*goal.objective, best.model);
    best.objective_value = k;
    bounded.objective_bound = k - 1;
    SolveResult next = solve(bounded, cfg);
    best.solve_ms += next.solve_ms;
    best.solver_calls += next.solver_calls;
    best.emitted_bytes = std::max(best.emitted_bytes, next.emitted_bytes);
    best.emitted_nodes = std::max(best.emitted_nodes, next.emitted_nodes);
    if (next.status == Status::Sat) {
      best.model = next.model;
      best.status = Status::Sat;
      continue;
    }
    if (next.status == Status::Unknown) best.unknown_optimality = true;
    return best;
  }
}

} // namespace bonsai
