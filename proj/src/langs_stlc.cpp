#include "bonsai/langs.hpp"
#include "bonsai/langs_impl.hpp"

#include <cassert>

namespace bonsai::langs {

// Simply-typed lambda calculus with integer and list-of-int constants, the
// Redex-style bug-suite language. Pair-encoded terms:
//
//   exp ::= a | b | c | 0 | nil | cons | hd | tl
//         | ((lam x) (ty exp))            abstraction
//         | (exp exp)                     application (constants are curried)
//   ty  ::= int | (list int) | (-> ty ty)
//
// Call-by-value with environments; a closure application checks the argument
// value against the parameter annotation (int wants a number, list wants nil
// or a cell, arrow wants something applicable) and sticks on mismatch.
// hd/tl of nil is a benign error value that propagates; hd/tl of a non-list
// and applying a non-function stick. Recursion is fuel-bounded at closure
// applications.
//
// The nine bugs, one-line mutations each. Published witness sizes
// (found/minimized) from the source benchmark are kept next to each bug;
// measured minima of this reconstruction are reported by the bench harness
// alongside them.
//
//   stlc-1  application skips the argument/domain comparison      (5 / 5)
//   stlc-2  type lookup returns the oldest binding of a name      (9 / 9)
//   stlc-3  abstraction emits (-> body param), sides swapped      (5 / 5)
//   stlc-4  the return type of cons is int                        (17 / 17)
//   stlc-5  tl of a cell yields the head                          (9 / 9)
//   stlc-6  hd of a cell yields the tail                          (17 / 13)
//   stlc-7  application does not evaluate its right-hand side     (9 / 5)
//   stlc-8  type lookup yields int whenever the name is bound     (29 / 21)
//   stlc-9  type lookup ignores the name, newest binding wins     (15 / 15)

namespace {

const char* kStlcGrammar =
    "([exp a b c 0 nil cons hd tl ((lam x) (ty exp)) (exp exp)]"
    " [x a b c]"
    " [ty int (list int) (-> ty ty)])";

struct Bugs {
  bool app_no_argcheck = false;  // stlc-1
  bool lookup_oldest = false;    // stlc-2
  bool lam_swapped = false;      // stlc-3
  bool cons_ret_int = false;     // stlc-4
  bool tl_gives_head = false;    // stlc-5
  bool hd_gives_tail = false;    // stlc-6
  bool arg_uneval = false;       // stlc-7
  bool lookup_int = false;       // stlc-8
  bool lookup_any = false;       // stlc-9

  static Bugs parse(const std::string& id) {
    Bugs b;
    if (id.empty() || id == "none") return b;
    if (id == "stlc-1") b.app_no_argcheck = true;
    else if (id == "stlc-2") b.lookup_oldest = true;
    else if (id == "stlc-3") b.lam_swapped = true;
    else if (id == "stlc-4") b.cons_ret_int = true;
    else if (id == "stlc-5") b.tl_gives_head = true;
    else if (id == "stlc-6") b.hd_gives_tail = true;
    else if (id == "stlc-7") b.arg_uneval = true;
    else if (id == "stlc-8") b.lookup_int = true;
    else if (id == "stlc-9") b.lookup_any = true;
    else throw LangError("unknown stlc bug '" + id + "'");
    return b;
  }
};

struct A {
  Atom a = atom("a"), b = atom("b"), c = atom("c");
  Atom zero = atom("0"), nil = atom("nil");
  Atom cons = atom("cons"), hd = atom("hd"), tl = atom("tl");
  Atom lam = atom("lam"), tint = atom("int"), tlist = atom("list"), arr = atom("->");
  Atom clo = atom("clo"), err = atom("err"), spent = atom("spent"), nilenv = atom("nilenv");
  std::vector<Atom> vars{a, b, c};
};
const A& at() {
  static A v;
  return v;
}

Pattern lam_pattern() {
  return ppair(ppair(pconst(at().lam), pvar("x")), ppair(pvar("ty"), pvar("body")));
}
Pattern arrow_pattern() { return ppair(pconst(at().arr), ppair(pvar("s"), pvar("r"))); }
Pattern cell_pattern() { return ppair(ppair(pconst(at().cons), pvar("h")), pvar("t")); }
Pattern partial_pattern() { return ppair(pconst(at().cons), pvar("h")); }
Pattern clo_pattern() {
  return ppair(pconst(at().clo),
               ppair(pvar("x"), ppair(pvar("ty"), ppair(pvar("body"), pvar("env")))));
}

ValPtr arrow_ty(ValPtr s, ValPtr r) {
  return node(cleaf(at().arr), node(std::move(s), std::move(r)));
}
ValPtr list_int_ty() { return node(cleaf(at().tlist), cleaf(at().tint)); }

// ---- symbolic typechecker ---------------------------------------------------

struct Checker {
  EvalCtx& ctx;
  Bugs bugs;

  // type environments are plain chains built here: (name . ty) entries
  Formula env_contains(const ValPtr& env, Atom name) {
    Session& s = ctx.session();
    if (env->kind == VKind::CLeaf) return s.false_();
    const ValPtr& entry = env->a;
    return s.mk_or(leaf_is(s, entry->a, name), env_contains(env->b, name));
  }

  ValPtr lookup(const ValPtr& env, Atom name) {
    Session& s = ctx.session();
    if (env->kind == VKind::CLeaf) return fail_here(ctx); // unbound variable
    const ValPtr& entry = env->a;
    const ValPtr& rest = env->b;
    if (bugs.lookup_any) return entry->b; // newest entry, name ignored
    Formula here = leaf_is(s, entry->a, name);
    ValPtr found = bugs.lookup_int ? cleaf(at().tint) : entry->b;
    if (bugs.lookup_oldest) {
      return sym_if(
          ctx, env_contains(rest, name), [&] { return lookup(rest, name); },
          [&] {
            return sym_if(
                ctx, here, [&] { return found; }, [&] { return fail_here(ctx); });
          });
    }
    return sym_if(
        ctx, here, [&] { return found; }, [&] { return lookup(rest, name); });
  }

  ValPtr check(const ValPtr& t, const ValPtr& env) {
    Session& s = ctx.session();
    std::vector<MatchCase> cases;
    for (Atom v : at().vars)
      cases.push_back({pconst(v), [&, v](EvalCtx&, const std::vector<ValPtr>&) {
                         return lookup(env, v);
                       }});
    cases.push_back({pconst(at().zero), [&](EvalCtx&, const std::vector<ValPtr>&) {
                       return cleaf(at().tint);
                     }});
    cases.push_back({pconst(at().nil), [&](EvalCtx&, const std::vector<ValPtr>&) {
                       return list_int_ty();
                     }});
    cases.push_back({pconst(at().cons), [&](EvalCtx&, const std::vector<ValPtr>&) {
                       ValPtr ret = bugs.cons_ret_int ? cleaf(at().tint) : list_int_ty();
                       return arrow_ty(cleaf(at().tint), arrow_ty(list_int_ty(), ret));
                     }});
    cases.push_back({pconst(at().hd), [&](EvalCtx&, const std::vector<ValPtr>&) {
                       return arrow_ty(list_int_ty(), cleaf(at().tint));
                     }});
    cases.push_back({pconst(at().tl), [&](EvalCtx&, const std::vector<ValPtr>&) {
                       return arrow_ty(list_int_ty(), list_int_ty());
                     }});
    cases.push_back({lam_pattern(), [&](EvalCtx& cx, const std::vector<ValPtr>& b) {
                       const ValPtr& x = b[0];
                       const ValPtr& ty = b[1];
                       const ValPtr& body = b[2];
                       std::vector<Formula> isvar;
                       for (Atom v : at().vars) isvar.push_back(leaf_is(s, x, v));
                       cx.assert_claim(
                           s.mk_or(std::span<const Formula>(isvar.data(), isvar.size())));
                       ValPtr env2 = node(node(x, ty), env);
                       ValPtr tbody = check(body, env2);
                       if (tbody->kind == VKind::Fail) return tbody;
                       return bugs.lam_swapped ? arrow_ty(tbody, ty) : arrow_ty(ty, tbody);
                     }});
    cases.push_back({ppair(pvar("f"), pvar("arg")),
                     [&](EvalCtx& cx, const std::vector<ValPtr>& b) {
                       ValPtr tf = check(b[0], env);
                       ValPtr ta = check(b[1], env);
                       if (tf->kind == VKind::Fail) return tf;
                       return tree_match(
                           cx, tf,
                           {{arrow_pattern(),
                             [&](EvalCtx& cy, const std::vector<ValPtr>& ar) {
                               if (!bugs.app_no_argcheck)
                                 cy.assert_claim(val_equal(s, ar[0], ta));
                               return ar[1];
                             }},
                            {pvar("other"), [&](EvalCtx& cy, const std::vector<ValPtr>&) {
                               return fail_here(cy); // applying a non-function type
                             }}});
                     }});
    return tree_match(ctx, t, cases);
  }
};

// ---- symbolic interpreter ---------------------------------------------------

struct Machine {
  EvalCtx& ctx;
  Bugs bugs;
  Formula out_of_fuel;

  Formula is_err(const ValPtr& v) { return leaf_is(ctx.session(), v, at().err); }

  Formula value_has_tag(const ValPtr& v, const ValPtr& ty) {
    Session& s = ctx.session();
    Formula ty_int = leaf_is(s, ty, at().tint);
    Formula ty_list = test_pattern(s, ppair(pconst(at().tlist), pvar("e")), ty).cond;
    Formula ty_arr = test_pattern(s, ppair(pconst(at().arr), pvar("e")), ty).cond;
    Formula v_num = leaf_is(s, v, at().zero);
    Formula v_list =
        s.mk_or(leaf_is(s, v, at().nil), test_pattern(s, cell_pattern(), v).cond);
    std::vector<Formula> funs = {
        test_pattern(s, ppair(pconst(at().clo), pvar("r")), v).cond,
        leaf_is(s, v, at().cons), leaf_is(s, v, at().hd), leaf_is(s, v, at().tl),
        test_pattern(s, partial_pattern(), v).cond};
    Formula v_fun = s.mk_or(std::span<const Formula>(funs.data(), funs.size()));
    return s.mk_or(s.mk_and(ty_int, v_num),
                   s.mk_or(s.mk_and(ty_list, v_list), s.mk_and(ty_arr, v_fun)));
  }

  ValPtr lookup(const ValPtr& env, Atom name) {
    return tree_match(
        ctx, env,
        {{pconst(at().nilenv),
          [&](EvalCtx& c, const std::vector<ValPtr>&) { return fail_here(c); }},
         {ppair(ppair(pvar("n"), pvar("v")), pvar("rest")),
          [&](EvalCtx& c, const std::vector<ValPtr>& b) {
            return sym_if(
                c, leaf_is(c.session(), b[0], name), [&] { return b[1]; },
                [&] { return lookup(b[2], name); });
          }}});
  }

  ValPtr elim(const ValPtr& v, bool want_head) {
    return tree_match(
        ctx, v,
        {{pconst(at().nil),
          [&](EvalCtx&, const std::vector<ValPtr>&) { return cleaf(at().err); }},
         {cell_pattern(),
          [&](EvalCtx&, const std::vector<ValPtr>& b) {
            bool take_head = want_head ? !bugs.hd_gives_tail : bugs.tl_gives_head;
            return take_head ? b[0] : b[1];
          }},
         {pvar("other"),
          [&](EvalCtx& c, const std::vector<ValPtr>&) { return fail_here(c); }}});
  }

  ValPtr apply(const ValPtr& vf, const ValPtr& varg, int fuel) {
    if (vf->kind == VKind::Fail) return vf;
    if (varg->kind == VKind::Fail) return varg;
    auto dispatch = [&]() -> ValPtr {
      return tree_match(
          ctx, vf,
          {{clo_pattern(),
            [&](EvalCtx& c, const std::vector<ValPtr>& b) -> ValPtr {
              const ValPtr& x = b[0];
              const ValPtr& ty = b[1];
              const ValPtr& body = b[2];
              const ValPtr& env = b[3];
              return sym_if(
                  c, value_has_tag(varg, ty),
                  [&]() -> ValPtr {
                    if (fuel <= 0) {
                      out_of_fuel = c.session().mk_or(out_of_fuel, c.path());
                      return cleaf(at().spent);
                    }
                    ValPtr env2 = node(node(x, varg), env);
                    return eval(body, env2, fuel - 1);
                  },
                  [&] { return fail_here(c); }); // argument fails the annotation
            }},
           {pconst(at().hd),
            [&](EvalCtx&, const std::vector<ValPtr>&) { return elim(varg, true); }},
           {pconst(at().tl),
            [&](EvalCtx&, const std::vector<ValPtr>&) { return elim(varg, false); }},
           {pconst(at().cons),
            [&](EvalCtx&, const std::vector<ValPtr>&) {
              return node(cleaf(at().cons), varg); // partial application
            }},
           {partial_pattern(),
            [&](EvalCtx&, const std::vector<ValPtr>& b) {
              return node(node(cleaf(at().cons), b[0]), varg); // the cell
            }},
           {pvar("other"), [&](EvalCtx& c, const std::vector<ValPtr>&) {
              return fail_here(c); // applying a number, nil or a cell
            }}});
    };
    return sym_if(
        ctx, is_err(vf), [&] { return cleaf(at().err); },
        [&] {
          return sym_if(
              ctx, is_err(varg), [&] { return cleaf(at().err); },
              [&] { return dispatch(); });
        });
  }

  ValPtr eval(const ValPtr& t, const ValPtr& env, int fuel) {
    std::vector<MatchCase> cases;
    for (Atom v : at().vars)
      cases.push_back({pconst(v), [&, v](EvalCtx&, const std::vector<ValPtr>&) {
                         return lookup(env, v);
                       }});
    for (Atom k : {at().zero, at().nil, at().cons, at().hd, at().tl})
      cases.push_back(
          {pconst(k), [&, k](EvalCtx&, const std::vector<ValPtr>&) { return cleaf(k); }});
    cases.push_back({lam_pattern(), [&](EvalCtx&, const std::vector<ValPtr>& b) {
                       return node(cleaf(at().clo),
                                   node(b[0], node(b[1], node(b[2], env))));
                     }});
    cases.push_back({ppair(pvar("f"), pvar("arg")),
                     [&](EvalCtx& c, const std::vector<ValPtr>& b) {
                       ValPtr vf = eval(b[0], env, fuel);
                       ValPtr va = bugs.arg_uneval ? b[1] : eval(b[1], env, fuel);
                       (void)c;
                       return apply(vf, va, fuel);
                     }});
    return tree_match(ctx, t, cases);
  }
};

// ---- concrete twins ---------------------------------------------------------
//
// The concrete interpreter mirrors the symbolic one value for value: stuck
// paths set a flag and yield a dead token that matches nothing, the err and
// spent atoms propagate identically.

struct CState {
  bool stuck = false;
  bool spent = false;
};

bool cis(const CTreePtr& t, Atom a) { return t->leaf && t->atom == a; }
bool c_lam(const CTreePtr& t) {
  return !t->leaf && !t->l->leaf && cis(t->l->l, at().lam) && !t->r->leaf;
}
bool c_cell(const CTreePtr& t) {
  return !t->leaf && !t->l->leaf && cis(t->l->l, at().cons);
}
bool c_partial(const CTreePtr& t) { return !t->leaf && cis(t->l, at().cons); }
bool c_clo(const CTreePtr& t) { return !t->leaf && cis(t->l, at().clo); }
const CTreePtr& dead() {
  static CTreePtr d = catom(atom("deadvalue"));
  return d;
}

struct CChecker {
  Bugs bugs;
  bool ill = false;

  CTreePtr mark_ill() {
    ill = true;
    return dead();
  }

  bool env_contains(const CTreePtr& env, Atom name) {
    for (const ConcreteTree* e = env.get(); !e->leaf; e = e->r.get())
      if (cis(e->l->l, name)) return true;
    return false;
  }

  CTreePtr lookup(const CTreePtr& env, Atom name) {
    if (env->leaf) return mark_ill();
    const CTreePtr& entry = env->l;
    const CTreePtr& rest = env->r;
    if (bugs.lookup_any) return entry->r;
    if (bugs.lookup_oldest && env_contains(rest, name)) return lookup(rest, name);
    if (cis(entry->l, name)) return bugs.lookup_int ? catom(at().tint) : entry->r;
    if (bugs.lookup_oldest) return mark_ill();
    return lookup(rest, name);
  }

  CTreePtr check(const CTreePtr& t, const CTreePtr& env) {
    for (Atom v : at().vars)
      if (cis(t, v)) return lookup(env, v);
    if (cis(t, at().zero)) return catom(at().tint);
    if (cis(t, at().nil)) return cnode(catom(at().tlist), catom(at().tint));
    auto listint = [] { return cnode(catom(at().tlist), catom(at().tint)); };
    auto arrow = [](CTreePtr s, CTreePtr r) {
      return cnode(catom(at().arr), cnode(std::move(s), std::move(r)));
    };
    if (cis(t, at().cons))
      return arrow(catom(at().tint),
                   arrow(listint(), bugs.cons_ret_int ? catom(at().tint) : listint()));
    if (cis(t, at().hd)) return arrow(listint(), catom(at().tint));
    if (cis(t, at().tl)) return arrow(listint(), listint());
    if (t->leaf) return mark_ill();
    if (c_lam(t)) {
      CTreePtr x = t->l->r;
      CTreePtr ty = t->r->l;
      CTreePtr body = t->r->r;
      bool isvar = false;
      for (Atom v : at().vars) isvar = isvar || cis(x, v);
      if (!isvar) return mark_ill();
      CTreePtr tbody = check(body, cnode(cnode(x, ty), env));
      return bugs.lam_swapped ? arrow(tbody, ty) : arrow(ty, tbody);
    }
    CTreePtr tf = check(t->l, env);
    CTreePtr ta = check(t->r, env);
    if (!tf->leaf && cis(tf->l, at().arr)) {
      if (!bugs.app_no_argcheck && !ctree_equal(tf->r->l, ta)) return mark_ill();
      return tf->r->r;
    }
    return mark_ill(); // applying a non-function type
  }
};

struct CMachine {
  Bugs bugs;
  CState st;

  CTreePtr mark_stuck() {
    st.stuck = true;
    return dead();
  }

  bool has_tag(const CTreePtr& v, const CTreePtr& ty) {
    bool ty_int = cis(ty, at().tint);
    bool ty_list = !ty->leaf && cis(ty->l, at().tlist);
    bool ty_arr = !ty->leaf && cis(ty->l, at().arr);
    bool v_num = cis(v, at().zero);
    bool v_list = cis(v, at().nil) || c_cell(v);
    bool v_fun = c_clo(v) || cis(v, at().cons) || cis(v, at().hd) || cis(v, at().tl) ||
                 c_partial(v);
    return (ty_int && v_num) || (ty_list && v_list) || (ty_arr && v_fun);
  }

  CTreePtr lookup(const CTreePtr& env, Atom name) {
    if (cis(env, at().nilenv)) return mark_stuck();
    if (env->leaf) return mark_stuck();
    if (!env->l->leaf && cis(env->l->l, name)) return env->l->r;
    if (env->l->leaf) return mark_stuck(); // dead-token entry
    return lookup(env->r, name);
  }

  CTreePtr elim(const CTreePtr& v, bool want_head) {
    if (cis(v, at().nil)) return catom(at().err);
    if (c_cell(v)) {
      bool take_head = want_head ? !bugs.hd_gives_tail : bugs.tl_gives_head;
      return take_head ? v->l->r : v->r;
    }
    return mark_stuck();
  }

  CTreePtr apply(const CTreePtr& vf, const CTreePtr& va, int fuel) {
    if (cis(vf, at().err) || cis(va, at().err)) return catom(at().err);
    if (c_clo(vf)) {
      CTreePtr x = vf->r->l;
      CTreePtr ty = vf->r->r->l;
      CTreePtr body = vf->r->r->r->l;
      CTreePtr env = vf->r->r->r->r;
      if (!has_tag(va, ty)) return mark_stuck();
      if (fuel <= 0) {
        st.spent = true;
        return catom(at().spent);
      }
      return eval(body, cnode(cnode(x, va), env), fuel - 1);
    }
    if (cis(vf, at().hd)) return elim(va, true);
    if (cis(vf, at().tl)) return elim(va, false);
    if (cis(vf, at().cons)) return cnode(catom(at().cons), va);
    if (c_partial(vf)) return cnode(cnode(catom(at().cons), vf->r), va);
    return mark_stuck();
  }

  CTreePtr eval(const CTreePtr& t, const CTreePtr& env, int fuel) {
    for (Atom v : at().vars)
      if (cis(t, v)) return lookup(env, v);
    for (Atom k : {at().zero, at().nil, at().cons, at().hd, at().tl})
      if (cis(t, k)) return catom(k);
    if (t->leaf) return mark_stuck();
    if (c_lam(t))
      return cnode(catom(at().clo),
                   cnode(t->l->r, cnode(t->r->l, cnode(t->r->r, env))));
    CTreePtr vf = eval(t->l, env, fuel);
    CTreePtr va = bugs.arg_uneval ? t->r : eval(t->r, env, fuel);
    return apply(vf, va, fuel);
  }
};

ConcreteRun stlc_concrete(const CTreePtr& t, int fuel, const std::string& bug) {
  Bugs bugs = Bugs::parse(bug);
  ConcreteRun r;
  {
    CChecker ck{bugs, false};
    ck.check(t, catom(at().nilenv));
    r.typechecks = !ck.ill;
  }
  {
    CMachine m{bugs, {}};
    CTreePtr v = m.eval(t, catom(at().nilenv), fuel);
    if (m.st.spent) {
      r.outcome = Outcome::OutOfFuel;
    } else if (m.st.stuck) {
      r.outcome = Outcome::Fail;
      r.detail = "stuck";
    } else {
      r.outcome = Outcome::Ok;
      r.detail = render_sexpr(v, TreeEncoding::Pair);
    }
  }
  return r;
}

QueryParts stlc_build(Session& s, const Grammar& g, int depth, int fuel,
                      const std::string& bug) {
  Bugs bugs = Bugs::parse(bug);
  BonsaiEnc enc{s};
  EvalCtx build_ctx(s);
  ValPtr program = enc.fresh_program(build_ctx, g, depth);
  QueryParts out;
  {
    EvalCtx sctx(s);
    out.syntax = enc.syntax(sctx, g, program);
  }
  {
    EvalCtx tctx(s);
    Checker ck{tctx, bugs};
    ck.check(program, cleaf(at().nilenv));
    out.typed = tctx.store_conjunction();
  }
  {
    EvalCtx ictx(s);
    Machine m{ictx, bugs, s.false_()};
    m.eval(program, cleaf(at().nilenv), fuel);
    out.exec_ok = ictx.store_conjunction();
    out.out_of_fuel = m.out_of_fuel;
  }
  out.size = enc.size_of(program, g.encoding());
  out.decode = [&s, program](const Model& m) { return concretize(s, program, m); };
  out.program_consts = enc.consts(program);
  out.program_tree = program;
  return out;
}

} // namespace

LangDef make_stlc() {
  LangDef def;
  def.name = "stlc";
  def.grammar = Grammar::parse(kStlcGrammar, TreeEncoding::Pair);
  def.table_depth = 5;
  def.table_fuel = 4;
  for (int i = 1; i <= 9; i++) def.bug_ids.push_back("stlc-" + std::to_string(i));
  def.classic_supported = false;
  def.build = [g = def.grammar](Session& s, int depth, int fuel, const std::string& bug,
                                const std::string& encoding) {
    if (encoding == "classic")
      throw LangError("the classic encoding is wired up for arith, mini and fv only");
    return stlc_build(s, g, depth, fuel, bug);
  };
  def.build_diff = [g = def.grammar](Session& s, int depth, const std::string& bug_a,
                                     const std::string& bug_b) {
    BonsaiEnc enc{s};
    EvalCtx build_ctx(s);
    ValPtr program = enc.fresh_program(build_ctx, g, depth);
    DiffParts out;
    {
      EvalCtx sctx(s);
      out.syntax = enc.syntax(sctx, g, program);
    }
    {
      EvalCtx actx(s);
      Checker ck{actx, Bugs::parse(bug_a)};
      ck.check(program, cleaf(at().nilenv));
      out.typed_a = actx.store_conjunction();
    }
    {
      EvalCtx bctx(s);
      Checker ck{bctx, Bugs::parse(bug_b)};
      ck.check(program, cleaf(at().nilenv));
      out.typed_b = bctx.store_conjunction();
    }
    out.size = enc.size_of(program, g.encoding());
    out.decode = [&s, program](const Model& m) { return concretize(s, program, m); };
    return out;
  };
  def.run_concrete = stlc_concrete;
  return def;
}

} // namespace bonsai::langs
