#include "bonsai/tree.hpp"

#include <cassert>
#include <unordered_map>

namespace bonsai {

ValPtr fresh_tree(EvalCtx& ctx, int depth, const std::vector<Atom>& vocab) {
  if (vocab.empty()) throw BadVocabulary("fresh_tree needs a non-empty vocabulary");
  Session& s = ctx.session();
  if (depth <= 0) return sleaf(s.fresh_const(vocab));
  SymConstId shape = s.fresh_const({atom("leaf"), atom("inner")});
  SymConstId leaf_sym = s.fresh_const(vocab);
  ValPtr l = fresh_tree(ctx, depth - 1, vocab);
  ValPtr r = fresh_tree(ctx, depth - 1, vocab);
  return tree_ite(s, s.mk_eq(shape, atom("leaf")), sleaf(leaf_sym), node(l, r));
}

Pattern pvar(std::string name) {
  Pattern p;
  p.kind = Pattern::Kind::Var;
  p.name = std::move(name);
  return p;
}

Pattern pconst(Atom a) {
  Pattern p;
  p.kind = Pattern::Kind::Const;
  p.atom = a;
  return p;
}

Pattern ppair(Pattern l, Pattern r) {
  Pattern p;
  p.kind = Pattern::Kind::Pair;
  p.l = std::make_shared<Pattern>(std::move(l));
  p.r = std::make_shared<Pattern>(std::move(r));
  return p;
}

static void collect_vars(const Pattern& p, std::vector<std::string>& out) {
  switch (p.kind) {
    case Pattern::Kind::Var: out.push_back(p.name); break;
    case Pattern::Kind::Const: break;
    case Pattern::Kind::Pair:
      collect_vars(*p.l, out);
      collect_vars(*p.r, out);
      break;
  }
}

std::vector<std::string> pattern_vars(const Pattern& p) {
  std::vector<std::string> out;
  collect_vars(p, out);
  return out;
}

static size_t count_vars(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Var: return 1;
    case Pattern::Kind::Const: return 0;
    case Pattern::Kind::Pair: return count_vars(*p.l) + count_vars(*p.r);
  }
  return 0;
}

TestResult test_pattern(Session& s, const Pattern& p, const ValPtr& v) {
  s.stats.pattern_tests++;
  switch (p.kind) {
    case Pattern::Kind::Var:
      return {s.true_(), {v}};
    case Pattern::Kind::Const: {
      return {leaf_is(s, v, p.atom), {}};
    }
    case Pattern::Kind::Pair: {
      switch (v->kind) {
        case VKind::CLeaf:
        case VKind::SLeaf:
        case VKind::LeafIte:
        case VKind::Fail:
          return {s.false_(), std::vector<ValPtr>(count_vars(p), fail_val())};
        case VKind::Node: {
          TestResult lr = test_pattern(s, *p.l, v->a);
          TestResult rr = test_pattern(s, *p.r, v->b);
          TestResult out{s.mk_and(lr.cond, rr.cond), std::move(lr.bindings)};
          out.bindings.insert(out.bindings.end(), rr.bindings.begin(), rr.bindings.end());
          return out;
        }
        case VKind::Ite: {
          // The pattern shape selects the node alternative directly.
          TestResult sub = test_pattern(s, p, v->b);
          sub.cond = s.mk_and(s.mk_not(v->guard), sub.cond);
          return sub;
        }
      }
      break;
    }
  }
  return {s.false_(), {}};
}

namespace {

ValPtr combine_cases(Session& s, Formula cond, const ValPtr& hit, const ValPtr& rest) {
  // Fail branches carry their own unreachability assertions; drop them from
  // the merged value.
  if (hit->kind == VKind::Fail && rest->kind == VKind::Fail) return fail_val();
  if (hit->kind == VKind::Fail) return rest;
  if (rest->kind == VKind::Fail) return hit;
  return merge(s, cond, hit, rest);
}

ValPtr match_from(EvalCtx& ctx, const ValPtr& t, const std::vector<MatchCase>& cases, size_t i) {
  Session& s = ctx.session();
  if (i == cases.size()) {
    ctx.assert_unreachable();
    return fail_val();
  }
  TestResult tr = test_pattern(s, cases[i].pattern, t);
  if (tr.cond == s.false_()) return match_from(ctx, t, cases, i + 1);

  ValPtr hit;
  {
    EvalCtx::PathScope ps(ctx, tr.cond);
    hit = cases[i].handler(ctx, tr.bindings);
  }
  if (tr.cond == s.true_()) return hit; // later cases are unreachable
  ValPtr rest;
  {
    EvalCtx::PathScope ps(ctx, s.mk_not(tr.cond));
    rest = match_from(ctx, t, cases, i + 1);
  }
  return combine_cases(s, tr.cond, hit, rest);
}

} // namespace

ValPtr tree_match(EvalCtx& ctx, const ValPtr& t, const std::vector<MatchCase>& cases) {
  ctx.session().stats.match_calls++;
  if (t->kind == VKind::Fail) return fail_val();
  return match_from(ctx, t, cases, 0);
}

ValPtr sym_if(EvalCtx& ctx, Formula cond, const std::function<ValPtr()>& then_fn,
              const std::function<ValPtr()>& else_fn) {
  Session& s = ctx.session();
  if (cond == s.true_()) return then_fn();
  if (cond == s.false_()) return else_fn();
  ValPtr a, b;
  {
    EvalCtx::PathScope ps(ctx, cond);
    a = then_fn();
  }
  {
    EvalCtx::PathScope ps(ctx, s.mk_not(cond));
    b = else_fn();
  }
  return combine_cases(s, cond, a, b);
}

ValPtr fail_here(EvalCtx& ctx) {
  ctx.assert_unreachable();
  return fail_val();
}

Formula leaf_is(Session& s, const ValPtr& v, Atom a) {
  switch (v->kind) {
    case VKind::CLeaf:
      return v->atom == a ? s.true_() : s.false_();
    case VKind::SLeaf:
      return s.domain_index(v->cst, a) ? s.mk_eq(v->cst, a) : s.false_();
    case VKind::LeafIte:
      return s.mk_ite(v->guard, leaf_is(s, v->a, a), leaf_is(s, v->b, a));
    case VKind::Node:
    case VKind::Fail:
      return s.false_();
    case VKind::Ite:
      return s.mk_and(v->guard, leaf_is(s, v->a, a));
  }
  return s.false_();
}

Formula is_node_formula(Session& s, const ValPtr& v) {
  switch (v->kind) {
    case VKind::CLeaf:
    case VKind::SLeaf:
    case VKind::LeafIte:
    case VKind::Fail:
      return s.false_();
    case VKind::Node:
      return s.true_();
    case VKind::Ite:
      return s.mk_not(v->guard);
  }
  return s.false_();
}

namespace {

Formula leaf_term_eq(Session& s, const ValPtr& a, const ValPtr& b) {
  if (a->kind == VKind::LeafIte)
    return s.mk_ite(a->guard, leaf_term_eq(s, a->a, b), leaf_term_eq(s, a->b, b));
  if (b->kind == VKind::LeafIte)
    return s.mk_ite(b->guard, leaf_term_eq(s, a, b->a), leaf_term_eq(s, a, b->b));
  if (a->kind == VKind::CLeaf) return leaf_is(s, b, a->atom);
  if (b->kind == VKind::CLeaf) return leaf_is(s, a, b->atom);
  // two symbolic leaves
  if (a->cst == b->cst) return s.true_();
  std::vector<Formula> alts;
  for (Atom x : s.domain(a->cst))
    if (s.domain_index(b->cst, x))
      alts.push_back(s.mk_and(s.mk_eq(a->cst, x), s.mk_eq(b->cst, x)));
  return s.mk_or(std::span<const Formula>(alts.data(), alts.size()));
}

} // namespace

Formula val_equal(Session& s, const ValPtr& a, const ValPtr& b) {
  if (a->kind == VKind::Fail || b->kind == VKind::Fail) return s.false_();
  if (a == b) return s.true_();
  bool a_leaf = is_leaf_shaped(a), b_leaf = is_leaf_shaped(b);
  if (a_leaf && b_leaf) return leaf_term_eq(s, a, b);
  if (a->kind == VKind::Node && b->kind == VKind::Node)
    return s.mk_and(val_equal(s, a->a, b->a), val_equal(s, a->b, b->b));
  if (a_leaf && b->kind == VKind::Node) return s.false_();
  if (a->kind == VKind::Node && b_leaf) return s.false_();
  if (a->kind == VKind::Ite) {
    return s.mk_ite(a->guard, val_equal(s, a->a, b), val_equal(s, a->b, b));
  }
  // b is the remaining Ite
  return s.mk_ite(b->guard, val_equal(s, a, b->a), val_equal(s, a, b->b));
}

CTreePtr concretize(Session& s, const ValPtr& v, const Model& m) {
  switch (v->kind) {
    case VKind::CLeaf:
      return catom(v->atom);
    case VKind::SLeaf:
      return catom(m.at(v->cst));
    case VKind::LeafIte:
      return concretize(s, s.eval_formula(v->guard, m) ? v->a : v->b, m);
    case VKind::Node: {
      CTreePtr l = concretize(s, v->a, m);
      CTreePtr r = concretize(s, v->b, m);
      return cnode(std::move(l), std::move(r));
    }
    case VKind::Ite:
      return concretize(s, s.eval_formula(v->guard, m) ? v->a : v->b, m);
    case VKind::Fail:
      return nullptr;
  }
  return nullptr;
}

namespace {

struct SizeBuilder {
  Session& s;
  TreeEncoding enc;
  Atom nil{atom("nil")};
  std::unordered_map<const SymVal*, IntExpr> memo_head, memo_tail;

  IntExpr leaf_size(const ValPtr& v, bool tail_pos) {
    // In list mode nil is the size-free terminator wherever it sits; in pair
    // mode every atom counts.
    if (enc == TreeEncoding::Pair) return s.int_const(1);
    switch (v->kind) {
      case VKind::CLeaf:
        return s.int_const(v->atom == nil ? 0 : 1);
      case VKind::SLeaf:
        if (s.domain_index(v->cst, nil))
          return s.int_ite(s.mk_eq(v->cst, nil), s.int_const(0), s.int_const(1));
        return s.int_const(1);
      case VKind::LeafIte:
        return s.int_ite(v->guard, leaf_size(v->a, tail_pos), leaf_size(v->b, tail_pos));
      default:
        assert(false);
        return s.int_const(0);
    }
  }

  IntExpr go(const ValPtr& v, bool tail_pos) {
    auto& memo = tail_pos ? memo_tail : memo_head;
    auto it = memo.find(v.get());
    if (it != memo.end()) return it->second;
    IntExpr out{};
    switch (v->kind) {
      case VKind::CLeaf:
      case VKind::SLeaf:
      case VKind::LeafIte:
        out = leaf_size(v, tail_pos);
        break;
      case VKind::Node: {
        IntExpr parts[3] = {
            s.int_const(!tail_pos || enc == TreeEncoding::Pair ? 1 : 0),
            go(v->a, false),
            go(v->b, enc == TreeEncoding::List)};
        out = s.int_sum(parts);
        break;
      }
      case VKind::Ite:
        out = s.int_ite(v->guard, leaf_size(v->a, tail_pos), go(v->b, tail_pos));
        break;
      case VKind::Fail:
        out = s.int_const(0);
        break;
    }
    memo.emplace(v.get(), out);
    return out;
  }
};

} // namespace

IntExpr symbolic_size(Session& s, const ValPtr& t, TreeEncoding enc) {
  SizeBuilder sb{s, enc, atom("nil"), {}, {}};
  return sb.go(t, false);
}

ValPtr lift_concrete(const CTreePtr& t) {
  if (t->leaf) return cleaf(t->atom);
  return node(lift_concrete(t->l), lift_concrete(t->r));
}

namespace {

bool force_rec(Session& s, const ValPtr& v, const CTreePtr& target, Model& m) {
  switch (v->kind) {
    case VKind::SLeaf: {
      if (!target->leaf) return false;
      if (!s.domain_index(v->cst, target->atom)) return false;
      m.set(v->cst, target->atom);
      return true;
    }
    case VKind::CLeaf:
      return target->leaf && target->atom == v->atom;
    case VKind::Node:
      return !target->leaf && force_rec(s, v->a, target->l, m) &&
             force_rec(s, v->b, target->r, m);
    case VKind::Ite: {
      // fresh_tree guards are single shape-constant equations
      Formula g = v->guard;
      if (s.fkind(g) != FKind::Eq) return false;
      if (target->leaf) {
        m.set(s.eq_const(g), s.eq_atom(g));
        return force_rec(s, v->a, target, m);
      }
      const auto& dom = s.domain(s.eq_const(g));
      for (Atom a : dom)
        if (a != s.eq_atom(g)) {
          m.set(s.eq_const(g), a);
          break;
        }
      return force_rec(s, v->b, target, m);
    }
    default:
      return false;
  }
}

} // namespace

std::optional<Model> force_model(Session& s, const ValPtr& t, const CTreePtr& target) {
  Model m;
  if (!force_rec(s, t, target, m)) return std::nullopt;
  std::vector<SymConstId> cs;
  collect_consts(s, t, cs);
  for (SymConstId c : cs)
    if (!m.get(c)) m.set(c, s.domain(c)[0]);
  return m;
}

} // namespace bonsai
