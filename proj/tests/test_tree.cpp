#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "bonsai/tree.hpp"

#include <set>

using namespace bonsai;
using namespace bonsai::testutil;

namespace {

std::vector<Atom> arith_vocab() {
  return {atom("zero"), atom("succ"), atom("if"), atom("zero?"), atom("nil")};
}

} // namespace

TEST_CASE("fresh_tree depth 0 over a singleton vocabulary is a forced leaf") {
  Session s;
  EvalCtx ctx(s);
  ValPtr t = fresh_tree(ctx, 0, {atom("a")});
  REQUIRE(t->kind == VKind::SLeaf);
  Model m; // singleton domain still needs an assignment
  m.set(t->cst, atom("a"));
  CTreePtr c = concretize(s, t, m);
  CHECK(c->leaf);
  CHECK(c->atom == atom("a"));
  CHECK(ctx.store().empty());
}

TEST_CASE("fresh_tree depth 1 has one ite, one shape constant, three leaf constants") {
  Session s;
  EvalCtx ctx(s);
  ValPtr t = fresh_tree(ctx, 1, arith_vocab());
  REQUIRE(t->kind == VKind::Ite);
  CHECK(t->a->kind == VKind::SLeaf);
  REQUIRE(t->b->kind == VKind::Node);
  CHECK(t->b->a->kind == VKind::SLeaf);
  CHECK(t->b->b->kind == VKind::SLeaf);
  REQUIRE(s.num_consts() == 4);
  int shape = 0, leafc = 0;
  for (SymConstId c = 0; c < s.num_consts(); c++) {
    if (s.domain(c).size() == 2 && s.domain(c)[0] == atom("leaf")) shape++;
    else if (s.domain(c) == arith_vocab()) leafc++;
  }
  CHECK(shape == 1);
  CHECK(leafc == 3);
  CHECK(shape_ok(t));
}

TEST_CASE("fresh_tree embeds exactly the counted number of concrete trees") {
  // C(0) = |L|, C(k) = |L| + C(k-1)^2
  for (size_t nv = 1; nv <= 2; nv++) {
    std::vector<Atom> vocab;
    for (size_t i = 0; i < nv; i++) vocab.push_back(atom("v" + std::to_string(i)));
    std::vector<size_t> c = {nv};
    for (int d = 1; d <= 2; d++) c.push_back(nv + c.back() * c.back());
    for (int d = 0; d <= 2; d++) {
      Session s;
      EvalCtx ctx(s);
      ValPtr t = fresh_tree(ctx, d, vocab);
      std::vector<SymConstId> cs = consts_of(s, t);
      std::set<std::string> seen;
      all_models(s, cs, [&](const Model& m) {
        seen.insert(render_sexpr(concretize(s, t, m), TreeEncoding::Pair));
      });
      CHECK(seen.size() == c[d]);
    }
  }
}

TEST_CASE("matching a concrete leaf against a matching constant runs the handler directly") {
  Session s;
  EvalCtx ctx(s);
  ValPtr t = cleaf(atom("zero"));
  bool ran = false;
  ValPtr r = tree_match(ctx, t,
                        {{pconst(atom("zero")), [&](EvalCtx&, const std::vector<ValPtr>&) {
                            ran = true;
                            return cleaf(atom("nat"));
                          }}});
  CHECK(ran);
  REQUIRE(r->kind == VKind::CLeaf);
  CHECK(r->atom == atom("nat"));
  CHECK(ctx.store().empty());
}

TEST_CASE("an unmatchable scrutinee asserts the negated path and yields Fail") {
  Session s;
  EvalCtx ctx(s);
  SymConstId p = s.fresh_const({atom("t"), atom("f")});
  Formula pi = s.mk_eq(p, atom("t"));
  ValPtr t = cleaf(atom("zero"));
  ValPtr r;
  {
    EvalCtx::PathScope ps(ctx, pi);
    r = tree_match(ctx, t,
                   {{pconst(atom("succ")),
                     [&](EvalCtx&, const std::vector<ValPtr>&) { return cleaf(atom("x")); }}});
  }
  CHECK(r->kind == VKind::Fail);
  REQUIRE(ctx.store().size() == 1);
  // store gained not(pi)
  CHECK(ctx.store()[0] == s.mk_not(pi));
}

TEST_CASE("worked mini-language example: match and merge over a depth-3 tree") {
  // terms: a | [id, x] | [swap, [x, y]]
  std::vector<Atom> vocab = {atom("a"), atom("id"), atom("swap")};
  Session s;
  EvalCtx ctx(s);
  ValPtr t = fresh_tree(ctx, 3, vocab);

  auto eval_term = [&](const ValPtr& tree) {
    return tree_match(
        ctx, tree,
        {{pconst(atom("a")),
          [&](EvalCtx&, const std::vector<ValPtr>&) { return cleaf(atom("a")); }},
         {ppair(pconst(atom("swap")), ppair(pvar("x"), pvar("y"))),
          [&](EvalCtx&, const std::vector<ValPtr>& b) {
            return node(cleaf(atom("swap")), node(b[1], b[0]));
          }},
         {ppair(pconst(atom("id")), pvar("x")),
          [&](EvalCtx&, const std::vector<ValPtr>& b) { return b[0]; }}});
  };
  ValPtr out = eval_term(t);
  CHECK(shape_ok(out));

  auto run_on = [&](const std::string& text) {
    CTreePtr prog = embed_sexpr(text, TreeEncoding::Pair);
    auto fm = force_model(s, t, prog);
    REQUIRE(fm.has_value());
    CTreePtr got = concretize(s, out, *fm);
    REQUIRE(got != nullptr);
    return render_sexpr(got, TreeEncoding::Pair);
  };

  CHECK(run_on("a") == "a");
  CHECK(run_on("(swap (a (id a)))") == "(swap ((id a) a))");
  CHECK(run_on("(id (swap (a a)))") == "(swap (a a))");

  // exhaustively at depth 2: the three path conditions are disjoint and the
  // merged value agrees with a concrete pattern matcher under every model
  Session s2;
  EvalCtx ctx2(s2);
  ValPtr t2 = fresh_tree(ctx2, 2, vocab);
  ValPtr out2;
  {
    auto eval2 = [&](const ValPtr& tree) {
      return tree_match(
          ctx2, tree,
          {{pconst(atom("a")),
            [&](EvalCtx&, const std::vector<ValPtr>&) { return cleaf(atom("a")); }},
           {ppair(pconst(atom("swap")), ppair(pvar("x"), pvar("y"))),
            [&](EvalCtx&, const std::vector<ValPtr>& b) {
              return node(cleaf(atom("swap")), node(b[1], b[0]));
            }},
           {ppair(pconst(atom("id")), pvar("x")),
            [&](EvalCtx&, const std::vector<ValPtr>& b) { return b[0]; }}});
    };
    out2 = eval2(t2);
  }
  Formula store2 = ctx2.store_conjunction();
  auto concrete_step = [&](const CTreePtr& c) -> CTreePtr {
    if (c->leaf && c->atom == atom("a")) return c;
    if (!c->leaf && c->l->leaf && c->l->atom == atom("swap") && !c->r->leaf)
      return cnode(catom(atom("swap")), cnode(c->r->r, c->r->l));
    if (!c->leaf && c->l->leaf && c->l->atom == atom("id")) return c->r;
    return nullptr; // no rule applies
  };
  std::vector<SymConstId> cs = consts_of(s2, t2);
  all_models(s2, cs, [&](const Model& m) {
    CTreePtr prog = concretize(s2, t2, m);
    CTreePtr want = concrete_step(prog);
    bool store_ok = s2.eval_formula(store2, m);
    if (want == nullptr) {
      CHECK(!store_ok); // unmatched trees are excluded by the store
    } else {
      REQUIRE(store_ok);
      CTreePtr got = concretize(s2, out2, m);
      REQUIRE(got != nullptr);
      CHECK(ctree_equal(got, want));
    }
  });
}

TEST_CASE("earlier patterns take priority when several match") {
  Session s;
  EvalCtx ctx(s);
  std::vector<Atom> vocab = {atom("a"), atom("b")};
  ValPtr t = fresh_tree(ctx, 1, vocab);
  ValPtr r = tree_match(
      ctx, t,
      {{pvar("x"), [&](EvalCtx&, const std::vector<ValPtr>&) { return cleaf(atom("first")); }},
       {pconst(atom("a")),
        [&](EvalCtx&, const std::vector<ValPtr>&) { return cleaf(atom("second")); }}});
  std::vector<SymConstId> cs = consts_of(s, t);
  all_models(s, cs, [&](const Model& m) {
    CTreePtr got = concretize(s, r, m);
    CHECK(got->atom == atom("first"));
  });
}

TEST_CASE("pattern deeper than the tree is an unsatisfiable condition, not an error") {
  Session s;
  EvalCtx ctx(s);
  ValPtr t = fresh_tree(ctx, 0, {atom("a"), atom("b")});
  TestResult tr = test_pattern(s, ppair(pvar("x"), pvar("y")), t);
  CHECK(tr.cond == s.false_());
}

TEST_CASE("matching performs one test per case, independent of merge history") {
  Session s;
  EvalCtx ctx(s);
  std::vector<Atom> vocab = {atom("a"), atom("b")};
  // heavily merged value: fold several fresh trees together
  ValPtr v = fresh_tree(ctx, 2, vocab);
  for (int i = 0; i < 5; i++) {
    SymConstId p = s.fresh_const({atom("t"), atom("f")});
    v = merge(s, s.mk_eq(p, atom("t")), fresh_tree(ctx, 2, vocab), v);
  }
  uint64_t before = s.stats.pattern_tests;
  tree_match(ctx, v,
             {{ppair(pvar("x"), pvar("y")),
               [&](EvalCtx&, const std::vector<ValPtr>& b) { return b[0]; }},
              {pconst(atom("a")),
               [&](EvalCtx&, const std::vector<ValPtr>&) { return cleaf(atom("b")); }},
              {pvar("z"), [&](EvalCtx&, const std::vector<ValPtr>& b) { return b[0]; }}});
  uint64_t tests = s.stats.pattern_tests - before;
  // 3 cases, patterns touch at most 3 positions each; no per-alternative blowup
  CHECK(tests <= 3 * 3);
}

TEST_CASE("concretize resolves ites by their condition") {
  Session s;
  SymConstId p = s.fresh_const({atom("t"), atom("f")});
  Formula g = s.mk_eq(p, atom("t"));
  ValPtr v = tree_ite(s, g, cleaf(atom("x")), node(cleaf(atom("y")), cleaf(atom("z"))));
  Model m1, m2;
  m1.set(p, atom("t"));
  m2.set(p, atom("f"));
  CHECK(concretize(s, v, m1)->leaf);
  CHECK(!concretize(s, v, m2)->leaf);
}

TEST_CASE("symbolic_size matches the metric on fixed arithmetic programs") {
  Session s;
  Model empty;
  auto size_of = [&](const std::string& text) {
    CTreePtr c = embed_sexpr(text, TreeEncoding::List);
    ValPtr v = lift_concrete(c);
    IntExpr e = symbolic_size(s, v, TreeEncoding::List);
    int64_t sym = s.eval_int(e, empty);
    CHECK(sym == (int64_t)redex_size(c, TreeEncoding::List));
    return sym;
  };
  CHECK(size_of("zero") == 1);
  CHECK(size_of("(succ zero)") == 3);
  CHECK(size_of("(succ (if (zero? (succ zero)) zero (zero? zero)))") == 13);
}

TEST_CASE("symbolic_size equals the rendered size under every model") {
  for (auto enc : {TreeEncoding::List, TreeEncoding::Pair}) {
    Session s;
    EvalCtx ctx(s);
    std::vector<Atom> vocab = {atom("k"), atom("nil")};
    ValPtr t = fresh_tree(ctx, 2, vocab);
    IntExpr sz = symbolic_size(s, t, enc);
    std::vector<SymConstId> cs = consts_of(s, t);
    all_models(s, cs, [&](const Model& m) {
      CTreePtr c = concretize(s, t, m);
      CHECK(s.eval_int(sz, m) == (int64_t)redex_size(c, enc));
    });
  }
}

TEST_CASE("embed and render are inverses on list-encoded programs") {
  auto rt = [&](const std::string& text) {
    return render_sexpr(embed_sexpr(text, TreeEncoding::List), TreeEncoding::List);
  };
  CHECK(rt("zero") == "zero");
  CHECK(rt("(succ zero)") == "(succ zero)");
  CHECK(rt("(if (zero? zero) zero (succ zero))") == "(if (zero? zero) zero (succ zero))");
  CHECK(embed_sexpr("(succ zero)", TreeEncoding::List)->l->atom == atom("succ"));

  std::vector<Atom> vocab = {atom("zero"), atom("succ")};
  CHECK_THROWS_AS(embed_sexpr("(succ bogus)", TreeEncoding::List, &vocab), BadVocabAtom);
}

TEST_CASE("pair encoding folds right and renders strictly binary") {
  CTreePtr t = embed_sexpr("(lam a int 0)", TreeEncoding::Pair);
  CHECK(render_sexpr(t, TreeEncoding::Pair) == "(lam (a (int 0)))");
  CTreePtr app = embed_sexpr("((cons 0) nil)", TreeEncoding::Pair);
  CHECK(redex_size(app, TreeEncoding::Pair) == 5);
  CHECK(render_sexpr(app, TreeEncoding::Pair) == "((cons 0) nil)");
}

TEST_CASE("val_equal captures structural equality as a formula") {
  Session s;
  EvalCtx ctx(s);
  std::vector<Atom> vocab = {atom("p"), atom("q")};
  ValPtr a = fresh_tree(ctx, 1, vocab);
  ValPtr b = fresh_tree(ctx, 1, vocab);
  Formula eq = val_equal(s, a, b);
  std::vector<SymConstId> cs = consts_of(s, a);
  for (SymConstId c : consts_of(s, b)) cs.push_back(c);
  all_models(s, cs, [&](const Model& m) {
    bool want = ctree_equal(concretize(s, a, m), concretize(s, b, m));
    CHECK(s.eval_formula(eq, m) == want);
  });
}
