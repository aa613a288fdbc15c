#include "bonsai/langs.hpp"
#include "bonsai/langs_impl.hpp"

#include <cassert>

namespace bonsai::langs {

// Typed arithmetic: exp ::= zero | (succ exp) | (if exp exp exp) | (zero? exp).
// List-encoded programs. The typechecker optionally omits the if-branch
// equality check ("arith-if"); the interpreter crashes when succ or zero?
// meets a boolean. The if condition follows scheme truthiness: anything that
// is not the false atom selects the then branch.

namespace {

const char* kArithGrammar = "([exp zero (succ exp) (if exp exp exp) (zero? exp)])";

Pattern plist(std::vector<Pattern> ps) {
  Pattern acc = pconst(atom("nil"));
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) acc = ppair(*it, acc);
  return acc;
}

// ---- symbolic model --------------------------------------------------------

template <class E>
typename E::Val check_rec(E& enc, EvalCtx& ctx, const typename E::Val& t, bool bug) {
  using Val = typename E::Val;
  Session& s = ctx.session();
  Atom nat = atom("nat"), boolean = atom("bool");
  using Case = typename E::Case;
  std::vector<Case> cases;
  cases.push_back({pconst(atom("zero")),
                   [&](EvalCtx&, const std::vector<Val>&) { return enc.leaf(nat); }});
  cases.push_back({plist({pconst(atom("succ")), pvar("x")}),
                   [&](EvalCtx& c, const std::vector<Val>& b) {
                     Val tx = check_rec(enc, c, b[0], bug);
                     c.assert_claim(enc.leaf_is_f(tx, nat));
                     return enc.leaf(nat);
                   }});
  cases.push_back({plist({pconst(atom("if")), pvar("c"), pvar("t"), pvar("f")}),
                   [&](EvalCtx& c, const std::vector<Val>& b) {
                     Val tc = check_rec(enc, c, b[0], bug);
                     c.assert_claim(enc.leaf_is_f(tc, boolean));
                     Val tt = check_rec(enc, c, b[1], bug);
                     Val tf = check_rec(enc, c, b[2], bug);
                     if (!bug) c.assert_claim(enc.val_eq(tt, tf)); // the omitted check
                     return tt;
                   }});
  cases.push_back({plist({pconst(atom("zero?")), pvar("x")}),
                   [&](EvalCtx& c, const std::vector<Val>& b) {
                     Val tx = check_rec(enc, c, b[0], bug);
                     c.assert_claim(enc.leaf_is_f(tx, nat));
                     return enc.leaf(boolean);
                   }});
  (void)s;
  return enc.match(ctx, t, cases);
}

// runtime numbers are zero or (succ . n) chains; booleans are true/false
template <class E>
Formula is_num(E& enc, const typename E::Val& v) {
  Session& s = enc.s;
  return s.mk_or(enc.leaf_is_f(v, atom("zero")),
                 enc.matches(v, ppair(pconst(atom("succ")), pvar("n"))));
}

template <class E>
typename E::Val exec_rec(E& enc, EvalCtx& ctx, const typename E::Val& t) {
  using Val = typename E::Val;
  Session& s = ctx.session();
  using Case = typename E::Case;
  std::vector<Case> cases;
  cases.push_back({pconst(atom("zero")),
                   [&](EvalCtx&, const std::vector<Val>&) { return enc.leaf(atom("zero")); }});
  cases.push_back({plist({pconst(atom("succ")), pvar("x")}),
                   [&](EvalCtx& c, const std::vector<Val>& b) {
                     Val vx = exec_rec(enc, c, b[0]);
                     c.assert_claim(is_num(enc, vx)); // incrementing a boolean crashes
                     return enc.pair(enc.leaf(atom("succ")), vx);
                   }});
  cases.push_back({plist({pconst(atom("if")), pvar("c"), pvar("t"), pvar("f")}),
                   [&](EvalCtx& c, const std::vector<Val>& b) {
                     Val vc = exec_rec(enc, c, b[0]);
                     Formula truthy = s.mk_not(enc.leaf_is_f(vc, atom("false")));
                     return enc.ite(
                         c, truthy, [&] { return exec_rec(enc, c, b[1]); },
                         [&] { return exec_rec(enc, c, b[2]); });
                   }});
  cases.push_back({plist({pconst(atom("zero?")), pvar("x")}),
                   [&](EvalCtx& c, const std::vector<Val>& b) {
                     Val vx = exec_rec(enc, c, b[0]);
                     c.assert_claim(is_num(enc, vx)); // comparing a boolean crashes
                     return enc.ite(
                         c, enc.leaf_is_f(vx, atom("zero")),
                         [&] { return enc.leaf(atom("true")); },
                         [&] { return enc.leaf(atom("false")); });
                   }});
  return enc.match(ctx, t, cases);
}

template <class E>
QueryParts build_with(Session& s, const Grammar& g, int depth, const std::string& bug) {
  bool bugged = !bug.empty();
  E enc{s};
  EvalCtx build_ctx(s);
  auto program = enc.fresh_program(build_ctx, g, depth);
  assert(build_ctx.store().empty());

  QueryParts out;
  {
    EvalCtx sctx(s);
    out.syntax = enc.syntax(sctx, g, program);
  }
  {
    EvalCtx tctx(s);
    check_rec(enc, tctx, program, bugged);
    out.typed = tctx.store_conjunction();
  }
  {
    EvalCtx ictx(s);
    exec_rec(enc, ictx, program);
    out.exec_ok = ictx.store_conjunction();
  }
  out.out_of_fuel = s.false_(); // structural recursion needs no bound
  out.size = enc.size_of(program, g.encoding());
  out.decode = [&s, enc, program](const Model& m) mutable { return enc.decode(program, m); };
  out.program_consts = enc.consts(program);
  if constexpr (std::is_same_v<E, BonsaiEnc>) out.program_tree = program;
  return out;
}

// ---- concrete twins --------------------------------------------------------

struct IllTyped {};
struct Crash {};

Atom ctype(const CTreePtr& t, bool bug) {
  auto parts = list_parts(t);
  if (t->leaf && t->atom == atom("zero")) return atom("nat");
  if (parts && parts->size() == 2 && (*parts)[0]->leaf && (*parts)[0]->atom == atom("succ")) {
    if (ctype((*parts)[1], bug) != atom("nat")) throw IllTyped{};
    return atom("nat");
  }
  if (parts && parts->size() == 4 && (*parts)[0]->leaf && (*parts)[0]->atom == atom("if")) {
    if (ctype((*parts)[1], bug) != atom("bool")) throw IllTyped{};
    Atom tt = ctype((*parts)[2], bug);
    Atom ff = ctype((*parts)[3], bug);
    if (!bug && tt != ff) throw IllTyped{};
    return tt;
  }
  if (parts && parts->size() == 2 && (*parts)[0]->leaf && (*parts)[0]->atom == atom("zero?")) {
    if (ctype((*parts)[1], bug) != atom("nat")) throw IllTyped{};
    return atom("bool");
  }
  throw IllTyped{};
}

// value: nonnegative number or boolean
struct AVal {
  bool is_num;
  int64_t n = 0;
  bool b = false;
};

AVal cexec(const CTreePtr& t) {
  auto parts = list_parts(t);
  if (t->leaf && t->atom == atom("zero")) return {true, 0, false};
  if (parts && parts->size() == 2 && (*parts)[0]->leaf && (*parts)[0]->atom == atom("succ")) {
    AVal v = cexec((*parts)[1]);
    if (!v.is_num) throw Crash{};
    return {true, v.n + 1, false};
  }
  if (parts && parts->size() == 4 && (*parts)[0]->leaf && (*parts)[0]->atom == atom("if")) {
    AVal c = cexec((*parts)[1]);
    bool truthy = c.is_num || c.b; // only the false atom is falsy
    return truthy ? cexec((*parts)[2]) : cexec((*parts)[3]);
  }
  if (parts && parts->size() == 2 && (*parts)[0]->leaf && (*parts)[0]->atom == atom("zero?")) {
    AVal v = cexec((*parts)[1]);
    if (!v.is_num) throw Crash{};
    return {false, 0, v.n == 0};
  }
  throw Crash{}; // not a program shape the interpreter knows
}

ConcreteRun arith_concrete(const CTreePtr& t, int, const std::string& bug) {
  ConcreteRun r;
  try {
    ctype(t, bug == "arith-if");
    r.typechecks = true;
  } catch (const IllTyped&) {
    r.typechecks = false;
  }
  try {
    AVal v = cexec(t);
    r.outcome = Outcome::Ok;
    r.detail = v.is_num ? std::to_string(v.n) : (v.b ? "true" : "false");
  } catch (const Crash&) {
    r.outcome = Outcome::Fail;
    r.detail = "interpreter crash";
  }
  return r;
}

} // namespace

LangDef make_arith() {
  LangDef def;
  def.name = "arith";
  def.grammar = Grammar::parse(kArithGrammar, TreeEncoding::List);
  def.table_depth = 9;
  def.table_fuel = 0;
  def.bug_ids = {"arith-if"};
  def.classic_supported = true;
  def.build = [g = def.grammar](Session& s, int depth, int, const std::string& bug,
                                const std::string& encoding) {
    if (encoding == "classic") return build_with<ClassicEnc>(s, g, depth, bug);
    return build_with<BonsaiEnc>(s, g, depth, bug);
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
      check_rec(enc, actx, program, !bug_a.empty());
      out.typed_a = actx.store_conjunction();
    }
    {
      EvalCtx bctx(s);
      check_rec(enc, bctx, program, !bug_b.empty());
      out.typed_b = bctx.store_conjunction();
    }
    out.size = enc.size_of(program, g.encoding());
    out.decode = [&s, program](const Model& m) { return concretize(s, program, m); };
    return out;
  };
  def.run_concrete = arith_concrete;
  return def;
}

} // namespace bonsai::langs
