#pragma once

#include "bonsai/grammar.hpp"
#include "bonsai/tree.hpp"

namespace bonsai::classic {

struct EmptyUnion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Classical symbolic syntax tree: a guarded union of alternatives, each a
// concrete leaf or an inner node over further unions. Guards of one union
// are pairwise disjoint; subtrees may be shared across branches.
struct UnionVal;
using UnionPtr = std::shared_ptr<const UnionVal>;

struct UBranch {
  Formula guard;
  bool is_leaf;
  Atom leaf = 0;
  UnionPtr l, r;
};

struct UnionVal {
  std::vector<UBranch> branches; // empty = failure token
};

UnionPtr uleaf(Atom a);
UnionPtr unode(UnionPtr l, UnionPtr r);
UnionPtr ufail();
inline bool is_ufail(const UnionPtr& u) { return u->branches.empty(); }
size_t union_branch_count(const UnionPtr& u); // top-level branches

// Grammar-directed construction: one branch per production embeddable in
// the remaining levels, chosen by a fresh constant; sub-unions are shared
// across the mutually exclusive branches of one union.
UnionPtr fresh_union_tree(EvalCtx& ctx, const Grammar& g, int levels);

struct UCase {
  Pattern pattern;
  std::function<UnionPtr(EvalCtx&, const std::vector<UnionPtr>&)> handler;
};

struct UTestResult {
  Formula cond;
  std::vector<UnionPtr> bindings;
};
// Walks every branch of the union (the O(n) cost the bonsai encoding
// avoids); extracted bindings are fresh unions.
UTestResult union_test(EvalCtx& ctx, const Pattern& p, const UnionPtr& u);

UnionPtr union_match(EvalCtx& ctx, const UnionPtr& u, const std::vector<UCase>& cases);

// Concatenates the branch lists under rewritten guards; the result can be
// as large as both inputs together.
UnionPtr union_merge(Session& s, Formula pi, const UnionPtr& a, const UnionPtr& b);

UnionPtr union_sym_if(EvalCtx& ctx, Formula cond, const std::function<UnionPtr()>& then_fn,
                      const std::function<UnionPtr()>& else_fn);

Formula union_leaf_is(Session& s, const UnionPtr& u, Atom a);

// Structural equality of two unions as a formula.
Formula union_val_eq(Session& s, const UnionPtr& a, const UnionPtr& b);

// Resolves guards under the model; nullptr when no branch is selected.
CTreePtr union_concretize(Session& s, const UnionPtr& u, const Model& m);

void union_collect_consts(Session& s, const UnionPtr& u, std::vector<SymConstId>& out);

} // namespace bonsai::classic
