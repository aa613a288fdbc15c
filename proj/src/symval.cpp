#include "bonsai/symval.hpp"

#include <cassert>
#include <stdexcept>
#include <unordered_set>

namespace bonsai {

ValPtr cleaf(Atom a) {
  auto v = std::make_shared<SymVal>();
  v->kind = VKind::CLeaf;
  v->atom = a;
  return v;
}

ValPtr sleaf(SymConstId c) {
  auto v = std::make_shared<SymVal>();
  v->kind = VKind::SLeaf;
  v->cst = c;
  return v;
}

ValPtr node(ValPtr l, ValPtr r) {
  assert(l->kind != VKind::Fail && r->kind != VKind::Fail);
  auto v = std::make_shared<SymVal>();
  v->kind = VKind::Node;
  v->a = std::move(l);
  v->b = std::move(r);
  return v;
}

ValPtr fail_val() {
  static ValPtr f = [] {
    auto v = std::make_shared<SymVal>();
    v->kind = VKind::Fail;
    return v;
  }();
  return f;
}

ValPtr leaf_ite(Session& s, Formula g, ValPtr l, ValPtr r) {
  assert(is_leaf_shaped(l) && is_leaf_shaped(r));
  if (g == s.true_()) return l;
  if (g == s.false_()) return r;
  if (l == r) return l;
  if (l->kind == VKind::CLeaf && r->kind == VKind::CLeaf && l->atom == r->atom) return l;
  auto v = std::make_shared<SymVal>();
  v->kind = VKind::LeafIte;
  v->guard = g;
  v->a = std::move(l);
  v->b = std::move(r);
  return v;
}

ValPtr tree_ite(Session& s, Formula g, ValPtr l, ValPtr n) {
  assert(is_leaf_shaped(l) && is_node_shaped(n));
  if (g == s.true_()) return l;
  if (g == s.false_()) return n;
  auto v = std::make_shared<SymVal>();
  v->kind = VKind::Ite;
  v->guard = g;
  v->a = std::move(l);
  v->b = std::move(n);
  return v;
}

namespace {

// Decomposition of a value into the general ite(guard, leaf, node) form,
// with absent sides for pure leaves / pure nodes.
struct Parts {
  Formula guard; // true under models where the value is a leaf
  ValPtr leaf;   // may be null
  ValPtr node;   // may be null
};

Parts decompose(Session& s, const ValPtr& v) {
  switch (v->kind) {
    case VKind::CLeaf:
    case VKind::SLeaf:
    case VKind::LeafIte:
      return {s.true_(), v, nullptr};
    case VKind::Node:
      return {s.false_(), nullptr, v};
    case VKind::Ite:
      return {v->guard, v->a, v->b};
    case VKind::Fail:
      throw std::logic_error("merge applied to a Fail value");
  }
  return {};
}

} // namespace

ValPtr merge(Session& s, Formula pi, const ValPtr& a, const ValPtr& b) {
  s.stats.merge_calls++;
  if (a == b) return a;
  if (pi == s.true_()) return a;
  if (pi == s.false_()) return b;

  Parts pa = decompose(s, a);
  Parts pb = decompose(s, b);

  // ite((pi => guard_a) and (not pi => guard_b), ite(pi, leaf_a, leaf_b),
  //     [merge(pi, al, bl), merge(pi, ar, br)])
  Formula guard = s.mk_and(s.mk_implies(pi, pa.guard),
                           s.mk_implies(s.mk_not(pi), pb.guard));

  ValPtr leaf;
  if (pa.leaf && pb.leaf) leaf = leaf_ite(s, pi, pa.leaf, pb.leaf);
  else if (pa.leaf) leaf = pa.leaf;
  else leaf = pb.leaf;

  ValPtr nd;
  if (pa.node && pb.node) {
    if (pa.node == pb.node) nd = pa.node;
    else nd = node(merge(s, pi, pa.node->a, pb.node->a), merge(s, pi, pa.node->b, pb.node->b));
  } else {
    nd = pa.node ? pa.node : pb.node;
  }

  if (!nd) return leaf;      // both pure leaves
  if (!leaf) return nd;      // both pure nodes (guard folds false)
  return tree_ite(s, guard, leaf, nd);
}

bool shape_ok(const ValPtr& v) {
  switch (v->kind) {
    case VKind::CLeaf:
    case VKind::SLeaf:
    case VKind::Fail:
      return true;
    case VKind::LeafIte:
      return is_leaf_shaped(v->a) && is_leaf_shaped(v->b) && shape_ok(v->a) && shape_ok(v->b);
    case VKind::Node:
      return v->a->kind != VKind::Fail && v->b->kind != VKind::Fail &&
             shape_ok(v->a) && shape_ok(v->b);
    case VKind::Ite:
      return is_leaf_shaped(v->a) && is_node_shaped(v->b) && shape_ok(v->a) && shape_ok(v->b);
  }
  return false;
}

size_t node_count(const ValPtr& v) {
  switch (v->kind) {
    case VKind::CLeaf:
    case VKind::SLeaf:
    case VKind::LeafIte:
    case VKind::Fail:
      return 1;
    case VKind::Node:
      return 1 + node_count(v->a) + node_count(v->b);
    case VKind::Ite:
      // The ite and its leaf alternative occupy the same position as the
      // node alternative's root.
      return node_count(v->b);
  }
  return 0;
}

void collect_consts(Session& s, const ValPtr& v, std::vector<SymConstId>& out) {
  std::unordered_set<const SymVal*> seen;
  std::unordered_set<SymConstId> have(out.begin(), out.end());
  std::vector<const SymVal*> stack{v.get()};
  std::vector<Formula> guards;
  while (!stack.empty()) {
    const SymVal* p = stack.back();
    stack.pop_back();
    if (!seen.insert(p).second) continue;
    switch (p->kind) {
      case VKind::SLeaf:
        if (have.insert(p->cst).second) out.push_back(p->cst);
        break;
      case VKind::LeafIte:
      case VKind::Ite:
        guards.push_back(p->guard);
        stack.push_back(p->a.get());
        stack.push_back(p->b.get());
        break;
      case VKind::Node:
        stack.push_back(p->a.get());
        stack.push_back(p->b.get());
        break;
      default:
        break;
    }
  }
  for (Formula g : guards) s.collect_consts(g, out);
}

} // namespace bonsai
