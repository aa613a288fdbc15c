#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "bonsai/grammar.hpp"

#include <set>

using namespace bonsai;
using namespace bonsai::testutil;

namespace {

const char* kArith = "([exp zero (succ exp) (if exp exp exp) (zero? exp)])";

Grammar arith() { return Grammar::parse(kArith, TreeEncoding::List); }

} // namespace

TEST_CASE("parsing the arithmetic grammar") {
  Grammar g = arith();
  REQUIRE(g.nonterminals().size() == 1);
  CHECK(g.nonterminals()[0].productions.size() == 4);
  std::set<Atom> terms(g.vocabulary().begin(), g.vocabulary().end());
  std::set<Atom> want = {atom("zero"), atom("succ"), atom("if"), atom("zero?"), atom("nil")};
  CHECK(terms == want);
  CHECK(g.vocabulary().back() == atom("nil"));
  // vocabulary is deterministic across parses
  CHECK(Grammar::parse(kArith, TreeEncoding::List).vocabulary() == g.vocabulary());
}

TEST_CASE("single-terminal grammar") {
  Grammar g = Grammar::parse("([e a])", TreeEncoding::List);
  CHECK(g.vocabulary() == std::vector<Atom>{atom("a"), atom("nil")});
  CHECK(g.count_trees(1) == 1);
}

TEST_CASE("degenerate grammars are rejected") {
  CHECK_THROWS_AS(Grammar::parse("([e (succ t)] [t (succ t)])", TreeEncoding::List),
                  GrammarError);
  CHECK_THROWS_AS(Grammar::parse("([e])", TreeEncoding::List), GrammarError);
  CHECK_THROWS_AS(Grammar::parse("([e a] [e b])", TreeEncoding::List), GrammarError);
  CHECK_THROWS_AS(Grammar::parse("(((", TreeEncoding::List), ParseError);
}

TEST_CASE("stlc-style vocabulary is duplicate-free") {
  Grammar g = Grammar::parse(
      "([exp a b c 0 nil cons hd tl ((lam x) (ty exp)) (exp exp)]"
      " [x a b c]"
      " [ty int (list int) (-> ty ty)])",
      TreeEncoding::Pair);
  std::set<Atom> uniq(g.vocabulary().begin(), g.vocabulary().end());
  CHECK(uniq.size() == g.vocabulary().size());
  CHECK(uniq.count(atom("nil")) == 1);
  CHECK(uniq.count(atom("lam")) == 1);
  CHECK(!g.is_nonterminal(atom("a")));
  CHECK(g.is_nonterminal(atom("ty")));
}

TEST_CASE("arithmetic tree counts by depth") {
  Grammar g = arith();
  CHECK(g.count_trees(1) == 1); // only `zero`
  CHECK(g.count_trees(2) == 1);
  CHECK(g.count_trees(3) == 3); // zero, (succ zero), (zero? zero)
  BigInt d9 = g.count_trees(9);
  // Order of magnitude 1e4.
  CHECK(d9 >= 10000);
  CHECK(d9 < 100000);
  // monotone in depth
  for (int d = 1; d < 12; d++) CHECK(g.count_trees(d) <= g.count_trees(d + 1));
}

TEST_CASE("count_trees agrees with the enumerator under a depth bound") {
  Grammar g = arith();
  for (int d = 1; d <= 5; d++) {
    size_t n = 0;
    g.enumerate_trees(1000, d, [&](const CTreePtr& t) {
      CHECK(g.derives(t));
      CHECK((int)ctree_depth(t) <= d);
      n++;
      return true;
    });
    CHECK(BigInt(n) == g.count_trees(d));
  }
}

TEST_CASE("enumerator streams unique trees in nondecreasing size order") {
  Grammar g = arith();
  std::set<std::string> seen;
  size_t last = 0;
  g.enumerate_trees(9, -1, [&](const CTreePtr& t) {
    size_t sz = redex_size(t, TreeEncoding::List);
    CHECK(sz >= last);
    last = sz;
    std::string r = render_sexpr(t, TreeEncoding::List);
    CHECK(seen.insert(r).second);
    // round trip through the text form
    CHECK(ctree_equal(embed_sexpr(r, TreeEncoding::List), t));
    return true;
  });
  CHECK(seen.count("zero") == 1);
  CHECK(seen.count("(succ zero)") == 1);
  CHECK(seen.size() > 20);
}

TEST_CASE("syntax formula on forced leaves") {
  Grammar g = arith();
  Session s;
  EvalCtx ctx(s);
  CHECK(g.syntax_formula(ctx, cleaf(atom("zero"))) == s.true_());
  CHECK(g.syntax_formula(ctx, cleaf(atom("succ"))) == s.false_());
  CHECK(ctx.store().empty());
}

TEST_CASE("syntax formula model count equals the enumerator count") {
  Grammar g = arith();
  for (int fresh_depth = 1; fresh_depth <= 2; fresh_depth++) {
    Session s;
    EvalCtx ctx(s);
    ValPtr t = fresh_tree(ctx, fresh_depth, g.vocabulary());
    Formula syn = g.syntax_formula(ctx, t);
    std::set<std::string> accepted;
    std::vector<SymConstId> cs = consts_of(s, t);
    all_models(s, cs, [&](const Model& m) {
      CTreePtr c = concretize(s, t, m);
      bool sym = s.eval_formula(syn, m);
      CHECK(sym == g.derives(c));
      if (sym) accepted.insert(render_sexpr(c, TreeEncoding::List));
    });
    CHECK(BigInt(accepted.size()) == g.count_trees(fresh_depth + 1));
  }
}

TEST_CASE("checker accepts a forced embedding iff the enumerator lists the tree") {
  Grammar g = arith();
  Session s;
  EvalCtx ctx(s);
  ValPtr t = fresh_tree(ctx, 4, g.vocabulary());
  Formula syn = g.syntax_formula(ctx, t);
  std::set<std::string> enumerated;
  g.enumerate_trees(1000, 5, [&](const CTreePtr& c) {
    enumerated.insert(render_sexpr(c, TreeEncoding::List));
    return true;
  });
  // every enumerated tree of depth <= 5 is accepted under its forcing model
  size_t n = 0;
  g.enumerate_trees(1000, 5, [&](const CTreePtr& c) {
    auto fm = force_model(s, t, c);
    REQUIRE(fm.has_value());
    CHECK(s.eval_formula(syn, *fm));
    n++;
    return true;
  });
  CHECK(n == enumerated.size());
  // and some invalid trees are rejected
  CTreePtr bad = embed_sexpr("(succ succ)", TreeEncoding::List);
  auto fm = force_model(s, t, bad);
  REQUIRE(fm.has_value());
  CHECK(!s.eval_formula(syn, *fm));
}
