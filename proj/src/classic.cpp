#include "bonsai/classic.hpp"

#include <cassert>
#include <map>
#include <unordered_set>

namespace bonsai::classic {

UnionPtr uleaf(Atom a) {
  auto u = std::make_shared<UnionVal>();
  u->branches.push_back({Formula{0}, true, a, nullptr, nullptr});
  return u;
}

UnionPtr unode(UnionPtr l, UnionPtr r) {
  auto u = std::make_shared<UnionVal>();
  u->branches.push_back({Formula{0}, false, 0, std::move(l), std::move(r)});
  return u;
}

UnionPtr ufail() {
  static UnionPtr f = std::make_shared<UnionVal>();
  return f;
}

size_t union_branch_count(const UnionPtr& u) { return u->branches.size(); }

namespace {

struct Expander {
  EvalCtx& ctx;
  const Grammar& g;

  UnionPtr expand(Atom nt, int levels) {
    Session& s = ctx.session();
    std::vector<const CTreePtr*> fitting;
    for (const CTreePtr& p : g.nonterminal(nt).productions)
      if (tmpl_depth(p) <= levels) fitting.push_back(&p);
    if (fitting.empty())
      throw EmptyUnion("no production of '" + atom_name(nt) + "' fits in " +
                       std::to_string(levels) + " levels");

    // one selector constant; sub-unions shared across the disjoint branches
    std::vector<Atom> alts;
    for (size_t i = 0; i < fitting.size(); i++) alts.push_back(atom("alt" + std::to_string(i)));
    SymConstId sel = s.fresh_const(std::span<const Atom>(alts.data(), alts.size()));

    auto u = std::make_shared<UnionVal>();
    std::map<std::pair<Atom, int>, std::vector<UnionPtr>> pool;
    for (size_t i = 0; i < fitting.size(); i++) {
      std::map<std::pair<Atom, int>, size_t> cursor;
      UBranch b = instantiate(*fitting[i], levels, pool, cursor);
      b.guard = fitting.size() == 1 ? s.true_() : s.mk_eq(sel, alts[i]);
      u->branches.push_back(std::move(b));
    }
    return u;
  }

  static int tmpl_depth(const CTreePtr& t) {
    if (t->leaf) return 1;
    return 1 + std::max(tmpl_depth(t->l), tmpl_depth(t->r));
  }

  // Top-level template of a production: aliases are rejected at parse time,
  // so this is either a terminal leaf or a node.
  UBranch instantiate(const CTreePtr& tmpl, int levels,
                      std::map<std::pair<Atom, int>, std::vector<UnionPtr>>& pool,
                      std::map<std::pair<Atom, int>, size_t>& cursor) {
    UBranch b;
    if (tmpl->leaf) {
      assert(!g.is_nonterminal(tmpl->atom));
      b.is_leaf = true;
      b.leaf = tmpl->atom;
      return b;
    }
    b.is_leaf = false;
    b.l = instantiate_sub(tmpl->l, levels - 1, pool, cursor);
    b.r = instantiate_sub(tmpl->r, levels - 1, pool, cursor);
    return b;
  }

  // Either a shared sub-union (hole) or a singleton union for fixed template
  // structure.
  UnionPtr instantiate_sub(const CTreePtr& tmpl, int levels,
                           std::map<std::pair<Atom, int>, std::vector<UnionPtr>>& pool,
                           std::map<std::pair<Atom, int>, size_t>& cursor) {
    if (tmpl->leaf && g.is_nonterminal(tmpl->atom)) return take(tmpl->atom, levels, pool, cursor);
    if (tmpl->leaf) return uleaf(tmpl->atom);
    UnionPtr l = instantiate_sub(tmpl->l, levels - 1, pool, cursor);
    UnionPtr r = instantiate_sub(tmpl->r, levels - 1, pool, cursor);
    return unode(std::move(l), std::move(r));
  }

  UnionPtr take(Atom nt, int levels,
                std::map<std::pair<Atom, int>, std::vector<UnionPtr>>& pool,
                std::map<std::pair<Atom, int>, size_t>& cursor) {
    auto key = std::make_pair(nt, levels);
    size_t i = cursor[key]++;
    auto& vec = pool[key];
    while (vec.size() <= i) vec.push_back(expand(nt, levels));
    return vec[i];
  }
};

} // namespace

UnionPtr fresh_union_tree(EvalCtx& ctx, const Grammar& g, int levels) {
  Expander ex{ctx, g};
  return ex.expand(g.start(), levels);
}

UTestResult union_test(EvalCtx& ctx, const Pattern& p, const UnionPtr& u) {
  Session& s = ctx.session();
  s.stats.pattern_tests++;
  switch (p.kind) {
    case Pattern::Kind::Var:
      return {s.true_(), {u}};
    case Pattern::Kind::Const: {
      return {union_leaf_is(s, u, p.atom), {}};
    }
    case Pattern::Kind::Pair: {
      size_t nvars = pattern_vars(p).size();
      std::vector<Formula> conds;
      std::vector<std::shared_ptr<UnionVal>> binds;
      for (size_t j = 0; j < nvars; j++) binds.push_back(std::make_shared<UnionVal>());
      for (const UBranch& br : u->branches) {
        s.stats.union_branch_visits++;
        if (br.is_leaf) continue;
        UTestResult lr = union_test(ctx, *p.l, br.l);
        UTestResult rr = union_test(ctx, *p.r, br.r);
        Formula ci = s.mk_and(br.guard, s.mk_and(lr.cond, rr.cond));
        if (ci == s.false_()) continue;
        conds.push_back(ci);
        // extracted subtrees go into fresh unions, guard-rewritten
        for (size_t k = 0; k < lr.bindings.size(); k++)
          for (const UBranch& sb : lr.bindings[k]->branches) {
            UBranch nb = sb;
            nb.guard = s.mk_and(ci, sb.guard);
            binds[k]->branches.push_back(std::move(nb));
          }
        size_t off = lr.bindings.size();
        for (size_t k = 0; k < rr.bindings.size(); k++)
          for (const UBranch& sb : rr.bindings[k]->branches) {
            UBranch nb = sb;
            nb.guard = s.mk_and(ci, sb.guard);
            binds[off + k]->branches.push_back(std::move(nb));
          }
      }
      UTestResult out;
      out.cond = s.mk_or(std::span<const Formula>(conds.data(), conds.size()));
      for (auto& b : binds) out.bindings.push_back(b);
      return out;
    }
  }
  return {s.false_(), {}};
}

namespace {

UnionPtr match_from(EvalCtx& ctx, const UnionPtr& u, const std::vector<UCase>& cases,
                    size_t i) {
  Session& s = ctx.session();
  if (i == cases.size()) {
    ctx.assert_unreachable();
    return ufail();
  }
  UTestResult tr = union_test(ctx, cases[i].pattern, u);
  if (tr.cond == s.false_()) return match_from(ctx, u, cases, i + 1);
  UnionPtr hit;
  {
    EvalCtx::PathScope ps(ctx, tr.cond);
    hit = cases[i].handler(ctx, tr.bindings);
  }
  if (tr.cond == s.true_()) return hit;
  UnionPtr rest;
  {
    EvalCtx::PathScope ps(ctx, s.mk_not(tr.cond));
    rest = match_from(ctx, u, cases, i + 1);
  }
  if (is_ufail(hit) && is_ufail(rest)) return ufail();
  if (is_ufail(hit)) return rest;
  if (is_ufail(rest)) return hit;
  return union_merge(s, tr.cond, hit, rest);
}

} // namespace

UnionPtr union_match(EvalCtx& ctx, const UnionPtr& u, const std::vector<UCase>& cases) {
  ctx.session().stats.match_calls++;
  if (is_ufail(u)) return ufail();
  return match_from(ctx, u, cases, 0);
}

UnionPtr union_merge(Session& s, Formula pi, const UnionPtr& a, const UnionPtr& b) {
  s.stats.merge_calls++;
  if (pi == s.true_()) return a;
  if (pi == s.false_()) return b;
  if (a == b) return a;
  auto u = std::make_shared<UnionVal>();
  Formula np = s.mk_not(pi);
  for (const UBranch& br : a->branches) {
    UBranch nb = br;
    nb.guard = s.mk_and(pi, br.guard);
    if (nb.guard != s.false_()) u->branches.push_back(std::move(nb));
  }
  for (const UBranch& br : b->branches) {
    UBranch nb = br;
    nb.guard = s.mk_and(np, br.guard);
    if (nb.guard != s.false_()) u->branches.push_back(std::move(nb));
  }
  return u;
}

UnionPtr union_sym_if(EvalCtx& ctx, Formula cond, const std::function<UnionPtr()>& then_fn,
                      const std::function<UnionPtr()>& else_fn) {
  Session& s = ctx.session();
  if (cond == s.true_()) return then_fn();
  if (cond == s.false_()) return else_fn();
  UnionPtr a, b;
  {
    EvalCtx::PathScope ps(ctx, cond);
    a = then_fn();
  }
  {
    EvalCtx::PathScope ps(ctx, s.mk_not(cond));
    b = else_fn();
  }
  if (is_ufail(a) && is_ufail(b)) return ufail();
  if (is_ufail(a)) return b;
  if (is_ufail(b)) return a;
  return union_merge(s, cond, a, b);
}

Formula union_leaf_is(Session& s, const UnionPtr& u, Atom a) {
  std::vector<Formula> alts;
  for (const UBranch& br : u->branches) {
    s.stats.union_branch_visits++;
    if (br.is_leaf && br.leaf == a) alts.push_back(br.guard);
  }
  return s.mk_or(std::span<const Formula>(alts.data(), alts.size()));
}

Formula union_val_eq(Session& s, const UnionPtr& a, const UnionPtr& b) {
  std::vector<Formula> alts;
  for (const UBranch& ba : a->branches)
    for (const UBranch& bb : b->branches) {
      Formula both = s.mk_and(ba.guard, bb.guard);
      if (both == s.false_()) continue;
      if (ba.is_leaf != bb.is_leaf) continue;
      Formula eq = ba.is_leaf
                       ? (ba.leaf == bb.leaf ? s.true_() : s.false_())
                       : s.mk_and(union_val_eq(s, ba.l, bb.l), union_val_eq(s, ba.r, bb.r));
      if (eq == s.false_()) continue;
      alts.push_back(s.mk_and(both, eq));
    }
  return s.mk_or(std::span<const Formula>(alts.data(), alts.size()));
}

CTreePtr union_concretize(Session& s, const UnionPtr& u, const Model& m) {
  for (const UBranch& br : u->branches) {
    if (!s.eval_formula(br.guard, m)) continue;
    if (br.is_leaf) return catom(br.leaf);
    CTreePtr l = union_concretize(s, br.l, m);
    CTreePtr r = union_concretize(s, br.r, m);
    if (!l || !r) return nullptr;
    return cnode(std::move(l), std::move(r));
  }
  return nullptr;
}

void union_collect_consts(Session& s, const UnionPtr& u, std::vector<SymConstId>& out) {
  std::unordered_set<const UnionVal*> seen;
  std::vector<const UnionVal*> stack{u.get()};
  std::vector<Formula> guards;
  while (!stack.empty()) {
    const UnionVal* p = stack.back();
    stack.pop_back();
    if (!seen.insert(p).second) continue;
    for (const UBranch& br : p->branches) {
      guards.push_back(br.guard);
      if (!br.is_leaf) {
        stack.push_back(br.l.get());
        stack.push_back(br.r.get());
      }
    }
  }
  for (Formula g : guards) s.collect_consts(g, out);
}

} // namespace bonsai::classic
