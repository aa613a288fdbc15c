#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "bonsai/langs.hpp"

using namespace bonsai;
using namespace bonsai::testutil;
using namespace bonsai::langs;

namespace {

const char* kCounterexample = "(succ (if (zero? (succ zero)) zero (zero? zero)))";

// classify a model against the symbolic phase formulas
struct SymVerdict {
  bool typed;
  Outcome outcome;
};

SymVerdict classify(Session& s, const QueryParts& p, const Model& m) {
  SymVerdict v;
  v.typed = s.eval_formula(p.typed, m);
  if (s.eval_formula(p.out_of_fuel, m)) v.outcome = Outcome::OutOfFuel;
  else if (s.eval_formula(p.exec_ok, m)) v.outcome = Outcome::Ok;
  else v.outcome = Outcome::Fail;
  return v;
}

} // namespace

TEST_CASE("concrete twins on the worked examples") {
  const LangDef& def = lang("arith");
  auto run = [&](const std::string& text, const std::string& bug) {
    return def.run_concrete(embed_sexpr(text, TreeEncoding::List), 0, bug);
  };
  ConcreteRun r = run("zero", "");
  CHECK(r.typechecks);
  CHECK(r.outcome == Outcome::Ok);
  CHECK(r.detail == "0");

  // the published counterexample: accepted only by the buggy checker, and
  // the interpreter crashes incrementing a boolean
  ConcreteRun buggy = run(kCounterexample, "arith-if");
  CHECK(buggy.typechecks);
  CHECK(buggy.outcome == Outcome::Fail);
  ConcreteRun fixed = run(kCounterexample, "");
  CHECK(!fixed.typechecks);
  CHECK(fixed.outcome == Outcome::Fail);

  CHECK(run("(zero? zero)", "").detail == "true");
  CHECK(run("(if (zero? zero) (succ zero) zero)", "").detail == "1");
}

TEST_CASE("symbolic phases agree with the concrete twins for every model") {
  for (const char* encoding : {"bonsai", "classic"}) {
    for (const char* bug : {"", "arith-if"}) {
      const LangDef& def = lang("arith");
      Session s;
      QueryParts parts = def.build(s, 2, 0, bug, encoding);
      all_models(s, parts.program_consts, [&](const Model& m) {
        CTreePtr prog = parts.decode(m);
        REQUIRE(prog != nullptr);
        ConcreteRun cr = def.run_concrete(prog, 0, bug);
        SymVerdict sv = classify(s, parts, m);
        bool syn = s.eval_formula(parts.syntax, m);
        CHECK(syn == def.grammar.derives(prog));
        CHECK(sv.typed == cr.typechecks);
        CHECK(sv.outcome == cr.outcome);
      });
    }
  }
}

TEST_CASE("forcing models over enumerated programs agree with the twins") {
  const LangDef& def = lang("arith");
  for (const char* bug : {"", "arith-if"}) {
    Session s;
    QueryParts parts = def.build(s, 8, 0, bug, "bonsai");
    REQUIRE(parts.program_tree != nullptr);
    size_t n = 0;
    def.grammar.enumerate_trees(7, 9, [&](const CTreePtr& prog) {
      auto fm = force_model(s, parts.program_tree, prog);
      REQUIRE(fm.has_value());
      ConcreteRun cr = def.run_concrete(prog, 0, bug);
      SymVerdict sv = classify(s, parts, *fm);
      CHECK(s.eval_formula(parts.syntax, *fm));
      CHECK(sv.typed == cr.typechecks);
      CHECK(sv.outcome == cr.outcome);
      if (std::string(bug).empty())
        CHECK(!(cr.typechecks && cr.outcome == Outcome::Fail)); // no-bug soundness
      n++;
      return true;
    });
    CHECK(n == 24); // all arithmetic programs of size <= 7
  }
}
