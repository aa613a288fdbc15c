#include "bonsai/formula.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <unordered_set>

namespace bonsai {

namespace {

inline void hash_combine(uint64_t& seed, uint64_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

} // namespace

Session::Session() {
  // ids 0/1 are reserved for True/False
  fnodes_.push_back({FKind::True, 0, 0, 0, 0});
  fnodes_.push_back({FKind::False, 0, 0, 0, 0});
}

SymConstId Session::fresh_const(std::span<const Atom> domain) {
  if (domain.empty()) throw BadDomain("symbolic constant needs a non-empty domain");
  std::unordered_set<Atom> seen;
  for (Atom a : domain)
    if (!seen.insert(a).second)
      throw BadDomain("symbolic constant domain contains duplicate atom '" + atom_name(a) + "'");
  SymConstId id = static_cast<SymConstId>(domains_.size());
  domains_.emplace_back(domain.begin(), domain.end());
  return id;
}

std::optional<size_t> Session::domain_index(SymConstId c, Atom a) const {
  const auto& d = domains_.at(c);
  auto it = std::find(d.begin(), d.end(), a);
  if (it == d.end()) return std::nullopt;
  return static_cast<size_t>(it - d.begin());
}

std::span<const Formula> Session::fchildren(Formula f) const {
  const FNode& n = fnodes_[f.id];
  return {fchild_pool_.data() + n.child_begin, n.child_count};
}

std::span<const IntExpr> Session::ichildren(IntExpr e) const {
  const INode& n = inodes_[e.id];
  return {ichild_pool_.data() + n.child_begin, n.child_count};
}

Formula Session::intern(FNode n, std::span<const Formula> children) {
  uint64_t h = static_cast<uint64_t>(n.kind);
  hash_combine(h, n.cst);
  hash_combine(h, n.atom);
  for (Formula c : children) hash_combine(h, c.id);
  auto& bucket = fbuckets_[h];
  for (uint32_t cand : bucket) {
    const FNode& m = fnodes_[cand];
    if (m.kind != n.kind || m.cst != n.cst || m.atom != n.atom || m.child_count != children.size())
      continue;
    bool same = true;
    for (uint32_t i = 0; i < m.child_count; i++)
      if (fchild_pool_[m.child_begin + i] != children[i]) { same = false; break; }
    if (same) return {cand};
  }
  n.child_begin = static_cast<uint32_t>(fchild_pool_.size());
  n.child_count = static_cast<uint32_t>(children.size());
  fchild_pool_.insert(fchild_pool_.end(), children.begin(), children.end());
  uint32_t id = static_cast<uint32_t>(fnodes_.size());
  fnodes_.push_back(n);
  bucket.push_back(id);
  return {id};
}

Formula Session::mk_eq(SymConstId c, Atom a) {
  auto idx = domain_index(c, a);
  if (!idx) throw BadAtom("atom '" + atom_name(a) + "' is outside the constant's domain");
  if (domains_[c].size() == 1) return true_(); // singleton domain forces equality
  FNode n{FKind::Eq, c, a, 0, 0};
  return intern(n, {});
}

Formula Session::mk_not(Formula f) {
  if (f == true_()) return false_();
  if (f == false_()) return true_();
  if (fkind(f) == FKind::Not) return fchildren(f)[0];
  Formula kids[1] = {f};
  return intern({FKind::Not, 0, 0, 0, 0}, kids);
}

Formula Session::mk_and(Formula a, Formula b) {
  Formula kids[2] = {a, b};
  return mk_and(std::span<const Formula>(kids, 2));
}

Formula Session::mk_or(Formula a, Formula b) {
  Formula kids[2] = {a, b};
  return mk_or(std::span<const Formula>(kids, 2));
}

Formula Session::mk_and(std::span<const Formula> fs) {
  std::vector<Formula> flat;
  for (Formula f : fs) {
    if (f == false_()) return false_();
    if (f == true_()) continue;
    if (fkind(f) == FKind::And) {
      auto kids = fchildren(f);
      flat.insert(flat.end(), kids.begin(), kids.end());
    } else {
      flat.push_back(f);
    }
  }
  if (flat.empty()) return true_();
  if (flat.size() == 1) return flat[0];
  return intern({FKind::And, 0, 0, 0, 0}, flat);
}

Formula Session::mk_or(std::span<const Formula> fs) {
  std::vector<Formula> flat;
  for (Formula f : fs) {
    if (f == true_()) return true_();
    if (f == false_()) continue;
    if (fkind(f) == FKind::Or) {
      auto kids = fchildren(f);
      flat.insert(flat.end(), kids.begin(), kids.end());
    } else {
      flat.push_back(f);
    }
  }
  if (flat.empty()) return false_();
  if (flat.size() == 1) return flat[0];
  return intern({FKind::Or, 0, 0, 0, 0}, flat);
}

Formula Session::mk_implies(Formula a, Formula b) {
  if (a == true_()) return b;
  if (a == false_()) return true_();
  if (b == true_()) return true_();
  if (b == false_()) return mk_not(a);
  Formula kids[2] = {a, b};
  return intern({FKind::Implies, 0, 0, 0, 0}, kids);
}

IntExpr Session::intern_int(INode n, std::span<const IntExpr> children) {
  uint64_t h = static_cast<uint64_t>(n.kind) * 1315423911ull;
  hash_combine(h, static_cast<uint64_t>(n.value));
  hash_combine(h, n.cond.id);
  for (IntExpr c : children) hash_combine(h, c.id);
  auto& bucket = ibuckets_[h];
  for (uint32_t cand : bucket) {
    const INode& m = inodes_[cand];
    if (m.kind != n.kind || m.value != n.value || m.cond != n.cond ||
        m.child_count != children.size())
      continue;
    bool same = true;
    for (uint32_t i = 0; i < m.child_count; i++)
      if (!(ichild_pool_[m.child_begin + i] == children[i])) { same = false; break; }
    if (same) return {cand};
  }
  n.child_begin = static_cast<uint32_t>(ichild_pool_.size());
  n.child_count = static_cast<uint32_t>(children.size());
  ichild_pool_.insert(ichild_pool_.end(), children.begin(), children.end());
  uint32_t id = static_cast<uint32_t>(inodes_.size());
  inodes_.push_back(n);
  bucket.push_back(id);
  return {id};
}

IntExpr Session::int_const(int64_t v) {
  INode n{IKind::Const, v, {}, 0, 0};
  return intern_int(n, {});
}

IntExpr Session::int_ite(Formula c, IntExpr t, IntExpr e) {
  if (c == true_()) return t;
  if (c == false_()) return e;
  if (t == e) return t;
  INode n{IKind::Ite, 0, c, 0, 0};
  IntExpr kids[2] = {t, e};
  return intern_int(n, kids);
}

IntExpr Session::int_sum(std::span<const IntExpr> xs) {
  int64_t acc = 0;
  std::vector<IntExpr> rest;
  for (IntExpr x : xs) {
    if (ikind(x) == IKind::Const) {
      acc += int_value(x);
    } else if (ikind(x) == IKind::Sum) {
      auto kids = ichildren(x);
      rest.insert(rest.end(), kids.begin(), kids.end());
    } else {
      rest.push_back(x);
    }
  }
  if (acc != 0 || rest.empty()) rest.push_back(int_const(acc));
  if (rest.size() == 1) return rest[0];
  INode n{IKind::Sum, 0, {}, 0, 0};
  return intern_int(n, rest);
}

bool Session::eval_formula(Formula f, const Model& m) const {
  // Iterative post-order over the DAG; memoised per call.
  std::vector<int8_t> memo(fnodes_.size(), -1);
  std::vector<uint32_t> stack{f.id};
  while (!stack.empty()) {
    uint32_t id = stack.back();
    if (memo[id] >= 0) { stack.pop_back(); continue; }
    const FNode& n = fnodes_[id];
    switch (n.kind) {
      case FKind::True: memo[id] = 1; stack.pop_back(); break;
      case FKind::False: memo[id] = 0; stack.pop_back(); break;
      case FKind::Eq: {
        memo[id] = (m.at(n.cst) == n.atom) ? 1 : 0;
        stack.pop_back();
        break;
      }
      default: {
        bool ready = true;
        for (uint32_t i = 0; i < n.child_count; i++) {
          uint32_t c = fchild_pool_[n.child_begin + i].id;
          if (memo[c] < 0) { stack.push_back(c); ready = false; }
        }
        if (!ready) break;
        auto val = [&](uint32_t i) { return memo[fchild_pool_[n.child_begin + i].id] == 1; };
        bool r = false;
        switch (n.kind) {
          case FKind::Not: r = !val(0); break;
          case FKind::Implies: r = !val(0) || val(1); break;
          case FKind::And: {
            r = true;
            for (uint32_t i = 0; i < n.child_count; i++) r = r && val(i);
            break;
          }
          case FKind::Or: {
            r = false;
            for (uint32_t i = 0; i < n.child_count; i++) r = r || val(i);
            break;
          }
          default: assert(false);
        }
        memo[id] = r ? 1 : 0;
        stack.pop_back();
      }
    }
  }
  return memo[f.id] == 1;
}

int64_t Session::eval_int(IntExpr e, const Model& m) const {
  switch (ikind(e)) {
    case IKind::Const: return int_value(e);
    case IKind::Ite:
      return eval_formula(int_cond(e), m) ? eval_int(ichildren(e)[0], m)
                                          : eval_int(ichildren(e)[1], m);
    case IKind::Sum: {
      int64_t acc = 0;
      for (IntExpr c : ichildren(e)) acc += eval_int(c, m);
      return acc;
    }
  }
  return 0;
}

void Session::collect_consts(Formula f, std::vector<SymConstId>& out) const {
  std::vector<int8_t> seen(fnodes_.size(), 0);
  std::unordered_set<SymConstId> have(out.begin(), out.end());
  std::vector<uint32_t> stack{f.id};
  while (!stack.empty()) {
    uint32_t id = stack.back();
    stack.pop_back();
    if (seen[id]) continue;
    seen[id] = 1;
    const FNode& n = fnodes_[id];
    if (n.kind == FKind::Eq && have.insert(n.cst).second) out.push_back(n.cst);
    for (uint32_t i = 0; i < n.child_count; i++)
      stack.push_back(fchild_pool_[n.child_begin + i].id);
  }
}

void Session::collect_consts(IntExpr e, std::vector<SymConstId>& out) const {
  std::unordered_set<uint32_t> seen;
  std::vector<uint32_t> stack{e.id};
  while (!stack.empty()) {
    uint32_t id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    const INode& n = inodes_[id];
    if (n.kind == IKind::Ite) collect_consts(n.cond, out);
    for (uint32_t i = 0; i < n.child_count; i++)
      stack.push_back(ichild_pool_[n.child_begin + i].id);
  }
}

} // namespace bonsai
