#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "bonsai/smt.hpp"
#include "bonsai/tree.hpp"

using namespace bonsai;

TEST_CASE("empty goal emits only the preamble and solves sat") {
  Session s;
  Goal g = Goal::over(s, {});
  std::string text = emit_smtlib(g);
  CHECK(text == "(set-logic QF_LIA)\n(check-sat)\n");
  SolveResult r = solve(g, SolverConfig::from_env());
  CHECK(r.status == Status::Sat);
}

TEST_CASE("single equality constraint declares and asserts once") {
  Session s;
  SymConstId c = s.fresh_const({atom("zero"), atom("succ")});
  Goal g = Goal::over(s, {s.mk_eq(c, atom("zero"))});
  std::string text = emit_smtlib(g);
  CHECK(text.find("(declare-const c0 Int)") != std::string::npos);
  CHECK(text.find("(= c0 0)") != std::string::npos);
  // re-emission is byte-identical
  CHECK(emit_smtlib(g) == text);

  SolveResult r = solve(g, SolverConfig::from_env());
  REQUIRE(r.status == Status::Sat);
  CHECK(r.model.at(c) == atom("zero"));
}

TEST_CASE("contradictory equalities are unsat") {
  Session s;
  SymConstId c = s.fresh_const({atom("zero"), atom("succ")});
  Goal g = Goal::over(s, {s.mk_eq(c, atom("zero")), s.mk_eq(c, atom("succ"))});
  SolveResult r = solve(g, SolverConfig::from_env());
  CHECK(r.status == Status::Unsat);
}

TEST_CASE("sat models satisfy every hard formula on replay") {
  Session s;
  std::vector<Atom> dom = {atom("p"), atom("q"), atom("r")};
  SymConstId a = s.fresh_const(dom);
  SymConstId b = s.fresh_const(dom);
  SymConstId c = s.fresh_const(dom);
  std::vector<Formula> hard = {
      s.mk_or(s.mk_eq(a, atom("p")), s.mk_eq(b, atom("q"))),
      s.mk_implies(s.mk_eq(a, atom("p")), s.mk_eq(c, atom("r"))),
      s.mk_not(s.mk_eq(b, atom("q"))),
  };
  Goal g = Goal::over(s, hard);
  SolveResult r = solve(g, SolverConfig::from_env());
  REQUIRE(r.status == Status::Sat);
  for (Formula f : hard) CHECK(s.eval_formula(f, r.model));
}

TEST_CASE("a broken solver command is a transport error, not unsat") {
  Session s;
  SymConstId c = s.fresh_const({atom("x"), atom("y")});
  Goal g = Goal::over(s, {s.mk_eq(c, atom("x"))});
  SolverConfig cfg;
  cfg.solver = "/nonexistent/solver-binary";
  CHECK_THROWS_AS(solve(g, cfg), SolverError);
}

TEST_CASE("minimize walks the objective down to the true minimum") {
  Session s;
  std::vector<Atom> bits = {atom("off"), atom("on")};
  // objective = number of "on" bits among five constants, constrained so at
  // least two specific ones are on
  std::vector<SymConstId> cs;
  std::vector<IntExpr> terms;
  for (int i = 0; i < 5; i++) {
    SymConstId c = s.fresh_const(bits);
    cs.push_back(c);
    terms.push_back(s.int_ite(s.mk_eq(c, atom("on")), s.int_const(1), s.int_const(0)));
  }
  IntExpr obj = s.int_sum(std::span<const IntExpr>(terms.data(), terms.size()));
  std::vector<Formula> hard = {
      s.mk_eq(cs[1], atom("on")),
      s.mk_or(s.mk_eq(cs[3], atom("on")), s.mk_eq(cs[4], atom("on"))),
  };
  Goal g = Goal::over(s, hard, obj);
  SolveResult r = minimize(g, SolverConfig::from_env());
  REQUIRE(r.status == Status::Sat);
  CHECK(r.objective_value == 2);
  CHECK(!r.unknown_optimality);
  CHECK(s.eval_int(obj, r.model) == 2);
  CHECK(r.solver_calls >= 2);
}

TEST_CASE("minimize on an unsat goal reports unsat") {
  Session s;
  SymConstId c = s.fresh_const({atom("x"), atom("y")});
  IntExpr obj = s.int_const(5);
  Goal g = Goal::over(s, {s.mk_eq(c, atom("x")), s.mk_eq(c, atom("y"))}, obj);
  SolveResult r = minimize(g, SolverConfig::from_env());
  CHECK(r.status == Status::Unsat);
}

TEST_CASE("constant objective minimizes in one extra step") {
  Session s;
  SymConstId c = s.fresh_const({atom("x"), atom("y")});
  IntExpr obj = s.int_const(5);
  Goal g = Goal::over(s, {s.mk_eq(c, atom("x"))}, obj);
  SolveResult r = minimize(g, SolverConfig::from_env());
  REQUIRE(r.status == Status::Sat);
  CHECK(r.objective_value == 5);
}
