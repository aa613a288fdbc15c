#include "bonsai/langs.hpp"
#include "bonsai/langs_impl.hpp"

#include <cassert>
#include <map>

namespace bonsai::langs {

namespace {

// ---------------------------------------------------------------------------
// mini: the three-term rewrite language used as an engine fixture.
//   term ::= a | (id term) | (swap (term term))
// execute performs one rewrite step; the typechecker accepts everything.
// ---------------------------------------------------------------------------

const char* kMiniGrammar = "([term a (id term) (swap (term term))])";

template <class E>
typename E::Val mini_step(E& enc, EvalCtx& ctx, const typename E::Val& t) {
  using Val = typename E::Val;
  using Case = typename E::Case;
  std::vector<Case> cases;
  cases.push_back({pconst(atom("a")),
                   [&](EvalCtx&, const std::vector<Val>&) { return enc.leaf(atom("a")); }});
  cases.push_back({ppair(pconst(atom("swap")), ppair(pvar("x"), pvar("y"))),
                   [&](EvalCtx&, const std::vector<Val>& b) {
                     return enc.pair(enc.leaf(atom("swap")), enc.pair(b[1], b[0]));
                   }});
  cases.push_back({ppair(pconst(atom("id")), pvar("x")),
                   [&](EvalCtx&, const std::vector<Val>& b) { return b[0]; }});
  return enc.match(ctx, t, cases);
}

template <class E>
QueryParts mini_build(Session& s, const Grammar& g, int depth) {
  E enc{s};
  EvalCtx build_ctx(s);
  auto program = enc.fresh_program(build_ctx, g, depth);
  QueryParts out;
  {
    EvalCtx sctx(s);
    out.syntax = enc.syntax(sctx, g, program);
  }
  out.typed = s.true_(); // every term is well-typed in the fixture language
  {
    EvalCtx ictx(s);
    mini_step(enc, ictx, program);
    out.exec_ok = ictx.store_conjunction();
  }
  out.out_of_fuel = s.false_();
  out.size = enc.size_of(program, g.encoding());
  out.decode = [&s, enc, program](const Model& m) mutable { return enc.decode(program, m); };
  out.program_consts = enc.consts(program);
  if constexpr (std::is_same_v<E, BonsaiEnc>) out.program_tree = program;
  return out;
}

ConcreteRun mini_concrete(const CTreePtr& t, int, const std::string&) {
  ConcreteRun r;
  r.typechecks = true;
  auto is = [&](const CTreePtr& x, const char* a) { return x->leaf && x->atom == atom(a); };
  if (is(t, "a") || (!t->leaf && is(t->l, "id")) ||
      (!t->leaf && is(t->l, "swap") && !t->r->leaf)) {
    r.outcome = Outcome::Ok;
  } else {
    r.outcome = Outcome::Fail;
    r.detail = "no rewrite rule applies";
  }
  return r;
}

// ---------------------------------------------------------------------------
// fv: untyped lambda calculus with a free-variable checker, the scaling
// benchmark. exp ::= a | b | c | ((lam x) exp) | (exp exp), call by value,
// recursion bounded by fuel.
// ---------------------------------------------------------------------------

const char* kFvGrammar = "([exp a b c ((lam x) exp) (exp exp)] [x a b c])";

const std::vector<Atom>& var_names() {
  static std::vector<Atom> v = {atom("a"), atom("b"), atom("c")};
  return v;
}

template <class E>
void fv_check(E& enc, EvalCtx& ctx, const typename E::Val& t,
              std::vector<typename E::Val> bound) {
  using Val = typename E::Val;
  using Case = typename E::Case;
  Session& s = ctx.session();
  std::vector<Case> cases;
  for (Atom v : var_names()) {
    cases.push_back({pconst(v), [&, v](EvalCtx& c, const std::vector<Val>&) {
                       std::vector<Formula> alts;
                       for (const Val& n : bound) alts.push_back(enc.leaf_is_f(n, v));
                       c.assert_claim(
                           s.mk_or(std::span<const Formula>(alts.data(), alts.size())));
                       return enc.leaf(atom("ok"));
                     }});
  }
  cases.push_back({ppair(ppair(pconst(atom("lam")), pvar("x")), pvar("body")),
                   [&](EvalCtx& c, const std::vector<Val>& b) {
                     std::vector<Formula> isvar;
                     for (Atom v : var_names()) isvar.push_back(enc.leaf_is_f(b[0], v));
                     c.assert_claim(
                         s.mk_or(std::span<const Formula>(isvar.data(), isvar.size())));
                     std::vector<Val> inner = bound;
                     inner.push_back(b[0]);
                     fv_check(enc, c, b[1], inner);
                     return enc.leaf(atom("ok"));
                   }});
  cases.push_back({ppair(pvar("f"), pvar("a")),
                   [&](EvalCtx& c, const std::vector<Val>& b) {
                     fv_check(enc, c, b[0], bound);
                     fv_check(enc, c, b[1], bound);
                     return enc.leaf(atom("ok"));
                   }});
  enc.match(ctx, t, cases);
}

template <class E>
struct FvExec {
  E& enc;
  Formula out_of_fuel;

  using Val = typename E::Val;

  Val lookup(EvalCtx& ctx, const Val& env, Atom name) {
    using Case = typename E::Case;
    std::vector<Case> cases;
    cases.push_back({pconst(atom("nilenv")),
                     [&](EvalCtx& c, const std::vector<Val>&) { return enc.fail(c); }});
    cases.push_back({ppair(ppair(pvar("n"), pvar("v")), pvar("rest")),
                     [&](EvalCtx& c, const std::vector<Val>& b) {
                       return enc.ite(
                           c, enc.leaf_is_f(b[0], name), [&] { return b[1]; },
                           [&] { return lookup(c, b[2], name); });
                     }});
    return enc.match(ctx, env, cases);
  }

  Val eval(EvalCtx& ctx, const Val& t, const Val& env, int fuel) {
    using Case = typename E::Case;
    std::vector<Case> cases;
    for (Atom v : var_names()) {
      cases.push_back({pconst(v), [&, v](EvalCtx& c, const std::vector<Val>&) {
                         return lookup(c, env, v);
                       }});
    }
    cases.push_back({ppair(ppair(pconst(atom("lam")), pvar("x")), pvar("body")),
                     [&](EvalCtx&, const std::vector<Val>& b) {
                       return enc.pair(enc.leaf(atom("clo")),
                                       enc.pair(b[0], enc.pair(b[1], env)));
                     }});
    cases.push_back({ppair(pvar("f"), pvar("a")),
                     [&](EvalCtx& c, const std::vector<Val>& b) {
                       Val vf = eval(c, b[0], env, fuel);
                       Val va = eval(c, b[1], env, fuel);
                       return apply(c, vf, va, fuel);
                     }});
    return enc.match(ctx, t, cases);
  }

  Val apply(EvalCtx& ctx, const Val& vf, const Val& va, int fuel) {
    using Case = typename E::Case;
    if (enc.is_fail(vf)) return vf;
    if (enc.is_fail(va)) return va;
    std::vector<Case> cases;
    cases.push_back(
        {ppair(pconst(atom("clo")), ppair(pvar("x"), ppair(pvar("body"), pvar("env")))),
         [&](EvalCtx& c, const std::vector<Val>& b) -> Val {
           if (fuel <= 0) {
             out_of_fuel = c.session().mk_or(out_of_fuel, c.path());
             return enc.leaf(atom("spent"));
           }
           Val env2 = enc.pair(enc.pair(b[0], va), b[2]);
           return eval(c, b[1], env2, fuel - 1);
         }});
    cases.push_back({pvar("other"),
                     [&](EvalCtx& c, const std::vector<Val>&) { return enc.fail(c); }});
    return enc.match(ctx, vf, cases);
  }
};

template <class E>
QueryParts fv_build(Session& s, const Grammar& g, int depth, int fuel) {
  E enc{s};
  EvalCtx build_ctx(s);
  auto program = enc.fresh_program(build_ctx, g, depth);
  QueryParts out;
  {
    EvalCtx sctx(s);
    out.syntax = enc.syntax(sctx, g, program);
  }
  {
    EvalCtx tctx(s);
    fv_check(enc, tctx, program, {});
    out.typed = tctx.store_conjunction();
  }
  {
    EvalCtx ictx(s);
    FvExec<E> fx{enc, s.false_()};
    fx.eval(ictx, program, enc.leaf(atom("nilenv")), fuel);
    out.exec_ok = ictx.store_conjunction();
    out.out_of_fuel = fx.out_of_fuel;
  }
  out.size = enc.size_of(program, g.encoding());
  out.decode = [&s, enc, program](const Model& m) mutable { return enc.decode(program, m); };
  out.program_consts = enc.consts(program);
  if constexpr (std::is_same_v<E, BonsaiEnc>) out.program_tree = program;
  return out;
}

// concrete twin
struct FvStuck {};
struct FvSpent {};

bool fv_closed(const CTreePtr& t, std::vector<Atom>& bound) {
  if (t->leaf) {
    for (Atom v : var_names())
      if (t->atom == v)
        return std::find(bound.begin(), bound.end(), v) != bound.end();
    return false; // not a variable leaf: not grammatical, checker rejects
  }
  if (!t->l->leaf && t->l->l->leaf && t->l->l->atom == atom("lam")) {
    if (!t->l->r->leaf) return false;
    Atom param = t->l->r->atom;
    if (std::find(var_names().begin(), var_names().end(), param) == var_names().end())
      return false;
    bound.push_back(param);
    bool ok = fv_closed(t->r, bound);
    bound.pop_back();
    return ok;
  }
  return fv_closed(t->l, bound) && fv_closed(t->r, bound);
}

CTreePtr fv_eval(const CTreePtr& t, const CTreePtr& env, int fuel) {
  if (t->leaf) {
    for (const ConcreteTree* e = env.get(); !e->leaf; e = e->r.get())
      if (e->l->l->leaf && e->l->l->atom == t->atom) return e->l->r;
    throw FvStuck{};
  }
  if (!t->l->leaf && t->l->l->leaf && t->l->l->atom == atom("lam"))
    return cnode(catom(atom("clo")), cnode(t->l->r, cnode(t->r, env)));
  CTreePtr vf = fv_eval(t->l, env, fuel);
  CTreePtr va = fv_eval(t->r, env, fuel);
  if (vf->leaf || !vf->l->leaf || vf->l->atom != atom("clo")) throw FvStuck{};
  if (fuel <= 0) throw FvSpent{};
  CTreePtr x = vf->r->l;
  CTreePtr body = vf->r->r->l;
  CTreePtr cenv = vf->r->r->r;
  return fv_eval(body, cnode(cnode(x, va), cenv), fuel - 1);
}

ConcreteRun fv_concrete(const CTreePtr& t, int fuel, const std::string&) {
  ConcreteRun r;
  std::vector<Atom> bound;
  r.typechecks = fv_closed(t, bound);
  try {
    fv_eval(t, catom(atom("nilenv")), fuel);
    r.outcome = Outcome::Ok;
  } catch (const FvStuck&) {
    r.outcome = Outcome::Fail;
    r.detail = "stuck";
  } catch (const FvSpent&) {
    r.outcome = Outcome::OutOfFuel;
  }
  return r;
}

} // namespace

LangDef make_mini() {
  LangDef def;
  def.name = "mini";
  def.grammar = Grammar::parse(kMiniGrammar, TreeEncoding::Pair);
  def.table_depth = 3;
  def.table_fuel = 0;
  def.classic_supported = true;
  def.build = [g = def.grammar](Session& s, int depth, int, const std::string& bug,
                                const std::string& encoding) {
    if (!bug.empty()) throw LangError("mini has no bugs to enable");
    if (encoding == "classic") return mini_build<ClassicEnc>(s, g, depth);
    return mini_build<BonsaiEnc>(s, g, depth);
  };
  def.run_concrete = mini_concrete;
  return def;
}

LangDef make_fv() {
  LangDef def;
  def.name = "fv";
  def.grammar = Grammar::parse(kFvGrammar, TreeEncoding::Pair);
  def.table_depth = 5;
  def.table_fuel = 4;
  def.classic_supported = true;
  def.build = [g = def.grammar](Session& s, int depth, int fuel, const std::string& bug,
                                const std::string& encoding) {
    if (!bug.empty()) throw LangError("fv has no bugs to enable");
    if (encoding == "classic") return fv_build<ClassicEnc>(s, g, depth, fuel);
    return fv_build<BonsaiEnc>(s, g, depth, fuel);
  };
  def.run_concrete = fv_concrete;
  return def;
}

const LangDef& lang(const std::string& name) {
  static std::map<std::string, LangDef> registry = [] {
    std::map<std::string, LangDef> r;
    LangDef a = make_arith();
    LangDef st = make_stlc();
    LangDef m = make_mini();
    LangDef f = make_fv();
    r.emplace(a.name, std::move(a));
    r.emplace(st.name, std::move(st));
    r.emplace(m.name, std::move(m));
    r.emplace(f.name, std::move(f));
    return r;
  }();
  auto it = registry.find(name);
  if (it == registry.end()) throw LangError("unknown language '" + name + "'");
  return it->second;
}

std::vector<std::string> lang_names() { return {"arith", "stlc", "mini", "fv"}; }

void check_bug_id(const LangDef& l, const std::string& bug) {
  if (bug.empty() || bug == "none") return;
  for (const auto& b : l.bug_ids)
    if (b == bug) return;
  throw LangError("language '" + l.name + "' has no bug '" + bug + "'");
}

} // namespace bonsai::langs
