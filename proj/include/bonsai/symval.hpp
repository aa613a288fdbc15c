#pragma once

#include "bonsai/formula.hpp"

#include <memory>

namespace bonsai {

// A symbolic tree value.
//
//   CLeaf    concrete leaf atom
//   SLeaf    symbolic leaf (a symbolic constant over a leaf domain)
//   LeafIte  guarded selection between two leaf-shaped values; this is the
//            ite(pi, a, b) term that a leaf-with-leaf merge produces
//   Node     inner node with two subtrees
//   Ite      guarded choice between a leaf-shaped value (guard true) and a
//            node-shaped value (guard false)
//   Fail     failure token (empty match); never occurs under a Node
//
// Values are immutable and shared; within one session they may be read from
// any thread.
struct SymVal;
using ValPtr = std::shared_ptr<const SymVal>;

enum class VKind : uint8_t { CLeaf, SLeaf, LeafIte, Node, Ite, Fail };

struct SymVal {
  VKind kind;
  Atom atom = 0;        // CLeaf
  SymConstId cst = 0;   // SLeaf
  Formula guard{};      // LeafIte / Ite
  ValPtr a, b;          // children: LeafIte(leaf,leaf) Node(l,r) Ite(leaf,node)
};

inline bool is_leaf_shaped(const ValPtr& v) {
  return v->kind == VKind::CLeaf || v->kind == VKind::SLeaf || v->kind == VKind::LeafIte;
}
inline bool is_node_shaped(const ValPtr& v) { return v->kind == VKind::Node; }

ValPtr cleaf(Atom a);
ValPtr sleaf(SymConstId c);
ValPtr node(ValPtr l, ValPtr r);
ValPtr fail_val();
// Guarded leaf selection; requires both branches leaf-shaped. Folds constant
// guards and identical branches.
ValPtr leaf_ite(Session& s, Formula g, ValPtr l, ValPtr r);
// Guarded leaf/node choice; requires l leaf-shaped and n node-shaped. Folds
// constant guards.
ValPtr tree_ite(Session& s, Formula g, ValPtr l, ValPtr n);

// Node-wise merge: the returned value concretizes as `a` under models
// satisfying pi and as `b` otherwise. Inputs must be Fail-free; the output
// never has more tree positions than the larger input.
ValPtr merge(Session& s, Formula pi, const ValPtr& a, const ValPtr& b);

// Recursive shape validator: every Ite has a leaf-shaped true branch and a
// Node false branch, every LeafIte is leaf-shaped throughout, and Fail never
// occurs below a Node.
bool shape_ok(const ValPtr& v);

// Tree positions occupied by a value (an Ite and its two alternatives share
// one position; LeafIte content counts as a single leaf position).
size_t node_count(const ValPtr& v);

// All symbolic constants mentioned in leaves and guards.
void collect_consts(Session& s, const ValPtr& v, std::vector<SymConstId>& out);

} // namespace bonsai
