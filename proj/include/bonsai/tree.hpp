#pragma once

#include "bonsai/sexpr.hpp"
#include "bonsai/symval.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bonsai {

struct BadVocabulary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fresh symbolic tree of the given depth: depth 0 is a single symbolic leaf;
// depth d > 0 is ite(shape = leaf, fresh leaf, [tree d-1, tree d-1]). The
// result embeds every concrete tree of at most 2^d leaf positions over the
// vocabulary. No assertions are recorded.
ValPtr fresh_tree(EvalCtx& ctx, int depth, const std::vector<Atom>& vocab);

// Match patterns.
struct Pattern {
  enum class Kind { Var, Const, Pair } kind;
  Atom atom = 0;                     // Const
  std::string name;                  // Var
  std::shared_ptr<const Pattern> l, r; // Pair
};

Pattern pvar(std::string name);
Pattern pconst(Atom a);
Pattern ppair(Pattern l, Pattern r);
// Variable names of a pattern in left-to-right order (handler argument order).
std::vector<std::string> pattern_vars(const Pattern& p);

using Handler = std::function<ValPtr(EvalCtx&, const std::vector<ValPtr>&)>;

struct MatchCase {
  Pattern pattern;
  Handler handler;
};

// Pure pattern test: the condition under which `v` matches `p`, plus the
// subtrees bound by the pattern's variables (left-to-right). Bindings are
// only meaningful when the condition is satisfiable; when the match is
// structurally impossible the condition is the constant false formula.
struct TestResult {
  Formula cond;
  std::vector<ValPtr> bindings;
};
TestResult test_pattern(Session& s, const Pattern& p, const ValPtr& v);

// Ordered pattern match. Case i runs under path /\ cond_i /\ not cond_1..i-1;
// results are merged with earlier cases taking priority. If no case can
// match, the current path is asserted unreachable and the result is Fail.
// Handlers returning Fail drop out of the merge (their unreachability is
// already recorded on the store); a Fail scrutinee propagates as Fail.
ValPtr tree_match(EvalCtx& ctx, const ValPtr& t, const std::vector<MatchCase>& cases);

// Branch-and-merge over a symbolic condition: evaluates both thunks under
// refined paths and merges the results.
ValPtr sym_if(EvalCtx& ctx, Formula cond, const std::function<ValPtr()>& then_fn,
              const std::function<ValPtr()>& else_fn);

// Asserts that the current path is unreachable and returns Fail. Model code
// uses this for runtime failure paths.
ValPtr fail_here(EvalCtx& ctx);

// Formula: v is leaf-shaped and equal to atom `a`.
Formula leaf_is(Session& s, const ValPtr& v, Atom a);
// Formula: both values concretize to identical trees.
Formula val_equal(Session& s, const ValPtr& a, const ValPtr& b);
// Formula: v is node-shaped under the model.
Formula is_node_formula(Session& s, const ValPtr& v);

// Resolves every choice via the model. Returns nullptr when a Fail value is
// reached.
CTreePtr concretize(Session& s, const ValPtr& v, const Model& m);

// Integer expression equal to redex_size(render(concretize(t, m))) for every
// model m, under the language's tree encoding.
IntExpr symbolic_size(Session& s, const ValPtr& t, TreeEncoding enc);

// Embeds a concrete tree as a constant symbolic value.
ValPtr lift_concrete(const CTreePtr& t);

// Model under which a fresh_tree value concretizes to the given concrete
// tree; constants not constrained by the choice take their first domain
// atom. Returns nullopt when the tree does not embed (too deep, or a leaf
// outside the vocabulary).
std::optional<Model> force_model(Session& s, const ValPtr& t, const CTreePtr& target);

} // namespace bonsai
