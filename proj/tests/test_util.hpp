#pragma once

#include "bonsai/grammar.hpp"
#include "bonsai/tree.hpp"

#include <functional>
#include <vector>

namespace bonsai::testutil {

// Enumerates every total model over the given constants (cartesian product
// of the domains, in domain order).
inline void all_models(Session& s, const std::vector<SymConstId>& consts,
                       const std::function<void(const Model&)>& fn) {
  Model m;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == consts.size()) {
      fn(m);
      return;
    }
    for (Atom a : s.domain(consts[i])) {
      m.set(consts[i], a);
      rec(i + 1);
    }
  };
  rec(0);
}

inline std::vector<SymConstId> consts_of(Session& s, const ValPtr& v) {
  std::vector<SymConstId> out;
  collect_consts(s, v, out);
  return out;
}

// Naive reference evaluator: direct recursion over the formula structure,
// no memoisation, no sharing awareness.
inline bool naive_eval(Session& s, Formula f, const Model& m) {
  switch (s.fkind(f)) {
    case FKind::True: return true;
    case FKind::False: return false;
    case FKind::Eq: return m.at(s.eq_const(f)) == s.eq_atom(f);
    case FKind::Not: return !naive_eval(s, s.fchildren(f)[0], m);
    case FKind::Implies:
      return !naive_eval(s, s.fchildren(f)[0], m) || naive_eval(s, s.fchildren(f)[1], m);
    case FKind::And: {
      for (Formula c : s.fchildren(f))
        if (!naive_eval(s, c, m)) return false;
      return true;
    }
    case FKind::Or: {
      for (Formula c : s.fchildren(f))
        if (naive_eval(s, c, m)) return true;
      return false;
    }
  }
  return false;
}

} // namespace bonsai::testutil
