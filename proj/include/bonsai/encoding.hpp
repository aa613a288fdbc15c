#pragma once

#include "bonsai/classic.hpp"
#include "bonsai/grammar.hpp"
#include "bonsai/tree.hpp"

namespace bonsai {

// Encoding policies: the tree-valued operations a language model needs,
// over either the guarded-tree (bonsai) or the symbolic-union (classic)
// program representation. Model code is templated over the policy.

struct BonsaiEnc {
  Session& s;
  using Val = ValPtr;
  struct Case {
    Pattern pattern;
    std::function<Val(EvalCtx&, const std::vector<Val>&)> handler;
  };

  static constexpr const char* name() { return "bonsai"; }

  Val fresh_program(EvalCtx& ctx, const Grammar& g, int depth) {
    return fresh_tree(ctx, depth, g.vocabulary());
  }
  Formula syntax(EvalCtx& ctx, const Grammar& g, const Val& v) {
    return g.syntax_formula(ctx, v);
  }
  Val match(EvalCtx& ctx, const Val& v, const std::vector<Case>& cases) {
    std::vector<MatchCase> mc;
    for (const Case& c : cases) mc.push_back({c.pattern, c.handler});
    return tree_match(ctx, v, mc);
  }
  Val leaf(Atom a) { return cleaf(a); }
  Val pair(const Val& l, const Val& r) {
    if (is_fail(l) || is_fail(r)) return fail_val();
    return node(l, r);
  }
  Formula leaf_is_f(const Val& v, Atom a) { return leaf_is(s, v, a); }
  Formula matches(const Val& v, const Pattern& p) { return test_pattern(s, p, v).cond; }
  Formula val_eq(const Val& a, const Val& b) {
    if (is_fail(a) || is_fail(b)) return s.false_();
    return val_equal(s, a, b);
  }
  Val ite(EvalCtx& ctx, Formula c, const std::function<Val()>& t,
          const std::function<Val()>& e) {
    return sym_if(ctx, c, t, e);
  }
  Val fail(EvalCtx& ctx) { return fail_here(ctx); }
  bool is_fail(const Val& v) const { return v->kind == VKind::Fail; }
  CTreePtr decode(const Val& v, const Model& m) { return concretize(s, v, m); }
  std::optional<IntExpr> size_of(const Val& v, TreeEncoding enc) {
    return symbolic_size(s, v, enc);
  }
  std::vector<SymConstId> consts(const Val& v) {
    std::vector<SymConstId> out;
    collect_consts(s, v, out);
    return out;
  }
};

struct ClassicEnc {
  Session& s;
  using Val = classic::UnionPtr;
  struct Case {
    Pattern pattern;
    std::function<Val(EvalCtx&, const std::vector<Val>&)> handler;
  };

  static constexpr const char* name() { return "classic"; }

  // depth uses the same convention as fresh_tree, so both encodings cover
  // the same program set at a given depth
  Val fresh_program(EvalCtx& ctx, const Grammar& g, int depth) {
    return classic::fresh_union_tree(ctx, g, depth + 1);
  }
  Formula syntax(EvalCtx&, const Grammar&, const Val&) {
    return s.true_(); // grammar-directed construction: syntax is built in
  }
  Val match(EvalCtx& ctx, const Val& v, const std::vector<Case>& cases) {
    std::vector<classic::UCase> mc;
    for (const Case& c : cases) mc.push_back({c.pattern, c.handler});
    return classic::union_match(ctx, v, mc);
  }
  Val leaf(Atom a) { return classic::uleaf(a); }
  Val pair(const Val& l, const Val& r) {
    if (is_fail(l) || is_fail(r)) return classic::ufail();
    return classic::unode(l, r);
  }
  Formula leaf_is_f(const Val& v, Atom a) { return classic::union_leaf_is(s, v, a); }
  Formula matches(const Val& v, const Pattern& p) {
    EvalCtx scratch(s);
    return classic::union_test(scratch, p, v).cond;
  }
  Formula val_eq(const Val& a, const Val& b) { return classic::union_val_eq(s, a, b); }
  Val ite(EvalCtx& ctx, Formula c, const std::function<Val()>& t,
          const std::function<Val()>& e) {
    return classic::union_sym_if(ctx, c, t, e);
  }
  Val fail(EvalCtx& ctx) {
    ctx.assert_unreachable();
    return classic::ufail();
  }
  bool is_fail(const Val& v) const { return classic::is_ufail(v); }
  CTreePtr decode(const Val& v, const Model& m) { return classic::union_concretize(s, v, m); }
  std::optional<IntExpr> size_of(const Val&, TreeEncoding) { return std::nullopt; }
  std::vector<SymConstId> consts(const Val& v) {
    std::vector<SymConstId> out;
    classic::union_collect_consts(s, v, out);
    return out;
  }
};

} // namespace bonsai
