#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "bonsai/langs.hpp"

#include <random>

using namespace bonsai;
using namespace bonsai::testutil;
using namespace bonsai::langs;

namespace {

CTreePtr stlc_embed(const std::string& text) { return embed_sexpr(text, TreeEncoding::Pair); }

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

TEST_CASE("concrete twin sanity on hand-written programs") {
  const LangDef& def = lang("stlc");
  auto run = [&](const std::string& text, const std::string& bug = "", int fuel = 4) {
    return def.run_concrete(stlc_embed(text), fuel, bug);
  };

  // identity application
  ConcreteRun idapp = run("(((lam a) (int 0)) 0)");
  CHECK(idapp.typechecks);
  CHECK(idapp.outcome == Outcome::Ok);
  CHECK(idapp.detail == "0");

  ConcreteRun identity = run("(((lam a) (int a)) 0)");
  CHECK(identity.typechecks);
  CHECK(identity.outcome == Outcome::Ok);
  CHECK(identity.detail == "0");

  // list construction and use
  ConcreteRun hd = run("(hd ((cons 0) nil))");
  CHECK(hd.typechecks);
  CHECK(hd.outcome == Outcome::Ok);
  CHECK(hd.detail == "0");

  // hd of the empty list is the benign error, not a soundness failure
  ConcreteRun hdnil = run("(hd nil)");
  CHECK(hdnil.typechecks);
  CHECK(hdnil.outcome == Outcome::Ok);
  CHECK(hdnil.detail == "err");

  // applying a number is ill-typed and stuck
  ConcreteRun appnum = run("(0 0)");
  CHECK(!appnum.typechecks);
  CHECK(appnum.outcome == Outcome::Fail);

  // the classic divergent self-application burns fuel
  ConcreteRun omega = run("(((lam a) ((-> int int) (a a))) ((lam a) ((-> int int) (a a))))", "");
  CHECK(!omega.typechecks); // (a a) does not typecheck simply
  (void)omega;

  // bug 5: tl yields the head, so hd of it sticks
  ConcreteRun b5 = run("(hd (tl ((cons 0) nil)))", "stlc-5");
  CHECK(b5.typechecks);
  CHECK(b5.outcome == Outcome::Fail);
  ConcreteRun b5off = run("(hd (tl ((cons 0) nil)))");
  CHECK(b5off.typechecks);
  CHECK(b5off.outcome == Outcome::Ok);
  CHECK(b5off.detail == "err"); // tl gives nil, hd of nil errs benignly

  // bug 4: a cell typed int flows into an int parameter and the tag check sticks
  ConcreteRun b4 = run("(((lam a) (int 0)) ((cons 0) nil))", "stlc-4");
  CHECK(b4.typechecks);
  CHECK(b4.outcome == Outcome::Fail);
  ConcreteRun b4off = run("(((lam a) (int 0)) ((cons 0) nil))");
  CHECK(!b4off.typechecks);

  // bug 7: the argument arrives unevaluated and hd sticks on a raw term
  ConcreteRun b7 = run("(hd (tl nil))", "stlc-7");
  CHECK(b7.typechecks);
  CHECK(b7.outcome == Outcome::Fail);
  CHECK(run("(hd (tl nil))").outcome == Outcome::Ok);

  // fuel exhaustion distinct from failure: any application at fuel zero
  ConcreteRun deep = run("(((lam a) (int a)) 0)", "", 0);
  CHECK(deep.typechecks);
  CHECK(deep.outcome == Outcome::OutOfFuel);
}

TEST_CASE("symbolic phases agree with the twins on every enumerated program") {
  const LangDef& def = lang("stlc");
  std::vector<std::string> bugs = {"", "stlc-1", "stlc-2", "stlc-3", "stlc-4",
                                   "stlc-5", "stlc-6", "stlc-7", "stlc-8", "stlc-9"};
  for (const std::string& bug : bugs) {
    CAPTURE(bug);
    Session s;
    QueryParts parts = def.build(s, 4, 3, bug, "bonsai");
    size_t n = 0;
    def.grammar.enumerate_trees(9, 5, [&](const CTreePtr& prog) {
      auto fm = force_model(s, parts.program_tree, prog);
      REQUIRE(fm.has_value());
      ConcreteRun cr = def.run_concrete(prog, 3, bug);
      SymVerdict sv = classify(s, parts, *fm);
      CHECK(s.eval_formula(parts.syntax, *fm));
      if (sv.typed != cr.typechecks || sv.outcome != cr.outcome) {
        CAPTURE(render_sexpr(prog, TreeEncoding::Pair));
        CHECK(sv.typed == cr.typechecks);
        CHECK(sv.outcome == cr.outcome);
      }
      n++;
      return true;
    });
    CHECK(n > 1000);
  }
}

TEST_CASE("random models agree with the twins at query depth") {
  const LangDef& def = lang("stlc");
  std::mt19937 rng(42);
  for (const std::string& bug : {std::string(""), std::string("stlc-4"), std::string("stlc-7")}) {
    CAPTURE(bug);
    Session s;
    QueryParts parts = def.build(s, 5, 4, bug, "bonsai");
    for (int trial = 0; trial < 500; trial++) {
      Model m;
      for (SymConstId c : parts.program_consts) {
        const auto& dom = s.domain(c);
        m.set(c, dom[rng() % dom.size()]);
      }
      CTreePtr prog = parts.decode(m);
      REQUIRE(prog != nullptr);
      ConcreteRun cr = def.run_concrete(prog, 4, bug);
      SymVerdict sv = classify(s, parts, m);
      bool syn = s.eval_formula(parts.syntax, m);
      CHECK(syn == def.grammar.derives(prog));
      if (sv.typed != cr.typechecks || sv.outcome != cr.outcome) {
        CAPTURE(render_sexpr(prog, TreeEncoding::Pair));
        CHECK(sv.typed == cr.typechecks);
        CHECK(sv.outcome == cr.outcome);
      }
    }
  }
}

TEST_CASE("no-bug soundness holds for all small programs") {
  const LangDef& def = lang("stlc");
  size_t n = 0;
  def.grammar.enumerate_trees(7, -1, [&](const CTreePtr& prog) {
    ConcreteRun cr = def.run_concrete(prog, 4, "");
    if (cr.typechecks && cr.outcome == Outcome::Fail) {
      CAPTURE(render_sexpr(prog, TreeEncoding::Pair));
      CHECK(false);
    }
    n++;
    return true;
  });
  CHECK(n > 10000);
}
