#pragma once

#include "bonsai/atoms.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace bonsai {

// A boolean formula node in a session's hash-consed DAG. Equality of ids
// implies structural equality within one session.
struct Formula {
  uint32_t id = 0;
  friend bool operator==(Formula a, Formula b) { return a.id == b.id; }
  friend bool operator!=(Formula a, Formula b) { return a.id != b.id; }
};

struct IntExpr {
  uint32_t id = 0;
  friend bool operator==(IntExpr a, IntExpr b) { return a.id == b.id; }
};

using SymConstId = uint32_t;

enum class FKind : uint8_t { True, False, Eq, Not, And, Or, Implies };
enum class IKind : uint8_t { Const, Ite, Sum };

struct BadDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadAtom : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompleteModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Assignment of one atom (index into the constant's domain) per constant.
class Model {
public:
  void set(SymConstId c, Atom a) { map_[c] = a; }
  std::optional<Atom> get(SymConstId c) const {
    auto it = map_.find(c);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  Atom at(SymConstId c) const {
    auto v = get(c);
    if (!v) throw IncompleteModel("model has no value for constant " + std::to_string(c));
    return *v;
  }
  size_t size() const { return map_.size(); }
  const std::unordered_map<SymConstId, Atom>& entries() const { return map_; }

private:
  std::unordered_map<SymConstId, Atom> map_;
};

// One symbolic-evaluation session: the constant allocator, the formula and
// integer-expression arenas, and instrumentation counters. Sessions are
// single-threaded and share nothing with one another.
class Session {
public:
  Session();

  // ---- symbolic constants -------------------------------------------------

  SymConstId fresh_const(std::span<const Atom> domain);
  SymConstId fresh_const(std::initializer_list<Atom> domain) {
    return fresh_const(std::span<const Atom>(domain.begin(), domain.size()));
  }
  const std::vector<Atom>& domain(SymConstId c) const { return domains_.at(c); }
  size_t num_consts() const { return domains_.size(); }
  // Index of `a` in c's domain, or nullopt.
  std::optional<size_t> domain_index(SymConstId c, Atom a) const;

  // ---- formula construction (hash-consed, constant-folded) ----------------

  Formula true_() const { return {0}; }
  Formula false_() const { return {1}; }
  Formula mk_eq(SymConstId c, Atom a);
  Formula mk_not(Formula f);
  Formula mk_and(Formula a, Formula b);
  Formula mk_or(Formula a, Formula b);
  Formula mk_and(std::span<const Formula> fs);
  Formula mk_or(std::span<const Formula> fs);
  Formula mk_implies(Formula a, Formula b);
  // ite over formulas: (c ∧ t) ∨ (¬c ∧ e)
  Formula mk_ite(Formula c, Formula t, Formula e) {
    return mk_or(mk_and(c, t), mk_and(mk_not(c), e));
  }

  FKind fkind(Formula f) const { return fnodes_[f.id].kind; }
  std::span<const Formula> fchildren(Formula f) const;
  SymConstId eq_const(Formula f) const { return fnodes_[f.id].cst; }
  Atom eq_atom(Formula f) const { return fnodes_[f.id].atom; }
  size_t num_formulas() const { return fnodes_.size(); }

  // ---- integer expressions -------------------------------------------------

  IntExpr int_const(int64_t v);
  IntExpr int_ite(Formula c, IntExpr t, IntExpr e);
  IntExpr int_sum(std::span<const IntExpr> xs);
  IKind ikind(IntExpr e) const { return inodes_[e.id].kind; }
  int64_t int_value(IntExpr e) const { return inodes_[e.id].value; }
  Formula int_cond(IntExpr e) const { return inodes_[e.id].cond; }
  std::span<const IntExpr> ichildren(IntExpr e) const;
  size_t num_intexprs() const { return inodes_.size(); }

  // ---- concrete evaluation (replay oracle) ---------------------------------

  bool eval_formula(Formula f, const Model& m) const;
  int64_t eval_int(IntExpr e, const Model& m) const;

  // Constants appearing in a formula / int expression.
  void collect_consts(Formula f, std::vector<SymConstId>& out) const;
  void collect_consts(IntExpr e, std::vector<SymConstId>& out) const;

  // ---- instrumentation ------------------------------------------------------

  struct Stats {
    uint64_t pattern_tests = 0;   // single pattern-vs-position tests
    uint64_t match_calls = 0;     // tree_match / union_match invocations
    uint64_t merge_calls = 0;
    uint64_t union_branch_visits = 0; // classic encoding: per-branch work
  };
  Stats stats;

private:
  struct FNode {
    FKind kind;
    SymConstId cst = 0;
    Atom atom = 0;
    uint32_t child_begin = 0;
    uint32_t child_count = 0;
  };
  struct INode {
    IKind kind;
    int64_t value = 0;
    Formula cond{};
    uint32_t child_begin = 0;
    uint32_t child_count = 0;
  };

  Formula intern(FNode n, std::span<const Formula> children);
  IntExpr intern_int(INode n, std::span<const IntExpr> children);

  std::vector<std::vector<Atom>> domains_;
  std::vector<FNode> fnodes_;
  std::vector<Formula> fchild_pool_;
  std::vector<INode> inodes_;
  std::vector<IntExpr> ichild_pool_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> fbuckets_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> ibuckets_;
};

// Evaluation context: the global path condition plus the assertion store.
// Assertions are appended already guarded by the path (path => claim).
class EvalCtx {
public:
  explicit EvalCtx(Session& s) : sess_(s), path_(s.true_()) {}

  Session& session() { return sess_; }
  Formula path() const { return path_; }
  void set_path(Formula p) { path_ = p; }

  void assert_claim(Formula claim) {
    store_.push_back(sess_.mk_implies(path_, claim));
  }
  // Records that the current path is infeasible (claim = false).
  void assert_unreachable() { assert_claim(sess_.false_()); }

  const std::vector<Formula>& store() const { return store_; }
  Formula store_conjunction() {
    return sess_.mk_and(std::span<const Formula>(store_.data(), store_.size()));
  }

  // Scoped path refinement.
  class PathScope {
  public:
    PathScope(EvalCtx& c, Formula extra)
        : ctx_(c), saved_(c.path_) {
      c.path_ = c.sess_.mk_and(saved_, extra);
    }
    ~PathScope() { ctx_.path_ = saved_; }

  private:
    EvalCtx& ctx_;
    Formula saved_;
  };

private:
  Session& sess_;
  Formula path_;
  std::vector<Formula> store_;
};

} // namespace bonsai
