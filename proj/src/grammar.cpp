#include "bonsai/grammar.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace bonsai {

Grammar Grammar::parse(const std::string& text, TreeEncoding enc) {
  Sexpr top = parse_sexpr(text);
  if (top.is_atom || top.tail || top.items.empty())
    throw GrammarError("grammar must be a list of [nonterminal production...] groups");
  Grammar g;
  g.enc_ = enc;
  for (const Sexpr& group : top.items) {
    if (group.is_atom || group.tail || group.items.empty() || !group.items[0].is_atom)
      throw GrammarError("each grammar group needs a leading nonterminal name");
    Nonterminal nt;
    nt.name = group.items[0].atom;
    if (g.nt_index_.count(nt.name))
      throw GrammarError("nonterminal '" + atom_name(nt.name) + "' defined twice");
    if (group.items.size() < 2)
      throw GrammarError("nonterminal '" + atom_name(nt.name) + "' has no productions");
    for (size_t i = 1; i < group.items.size(); i++)
      nt.productions.push_back(embed_sexpr(group.items[i], enc));
    g.nt_index_[nt.name] = g.nts_.size();
    g.nts_.push_back(std::move(nt));
  }
  g.validate();

  // vocabulary: terminals in appearance order, reserved nil last
  Atom nil = atom("nil");
  auto add = [&](Atom a) {
    if (a == nil || g.is_nonterminal(a)) return;
    if (std::find(g.vocab_.begin(), g.vocab_.end(), a) == g.vocab_.end())
      g.vocab_.push_back(a);
  };
  std::function<void(const CTreePtr&)> walk = [&](const CTreePtr& t) {
    if (t->leaf) add(t->atom);
    else {
      walk(t->l);
      walk(t->r);
    }
  };
  for (const auto& nt : g.nts_)
    for (const auto& p : nt.productions) walk(p);
  g.vocab_.push_back(nil);
  return g;
}

void Grammar::validate() const {
  // no alias productions (a production that is a bare nonterminal); this
  // keeps the counting recursion well-founded on depth
  for (const auto& nt : nts_)
    for (const auto& p : nt.productions)
      if (p->leaf && is_nonterminal(p->atom))
        throw GrammarError("alias production '" + atom_name(p->atom) + "' in '" +
                           atom_name(nt.name) + "'");
  // every nonterminal must derive at least one finite tree
  std::map<Atom, bool> finite;
  for (const auto& nt : nts_) finite[nt.name] = false;
  std::function<bool(const CTreePtr&)> tmpl_finite = [&](const CTreePtr& t) -> bool {
    if (t->leaf) return !is_nonterminal(t->atom) || finite.at(t->atom);
    return tmpl_finite(t->l) && tmpl_finite(t->r);
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& nt : nts_) {
      if (finite[nt.name]) continue;
      for (const auto& p : nt.productions) {
        if (tmpl_finite(p)) {
          finite[nt.name] = true;
          changed = true;
          break;
        }
      }
    }
  }
  for (const auto& [name, ok] : finite)
    if (!ok)
      throw GrammarError("nonterminal '" + atom_name(name) +
                         "' has no finite derivation (undefined reference or unbounded recursion)");
}

namespace {

struct SyntaxBuilder {
  EvalCtx& ctx;
  const Grammar& g;
  std::map<std::pair<const SymVal*, Atom>, Formula> memo;

  Formula check(const ValPtr& v, Atom nt) {
    auto key = std::make_pair(v.get(), nt);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Session& s = ctx.session();
    std::vector<Formula> alts;
    for (const CTreePtr& tmpl : g.nonterminal(nt).productions)
      alts.push_back(match_template(v, tmpl));
    Formula out = s.mk_or(std::span<const Formula>(alts.data(), alts.size()));
    memo.emplace(key, out);
    return out;
  }

  Formula match_template(const ValPtr& v, const CTreePtr& tmpl) {
    Session& s = ctx.session();
    if (tmpl->leaf) {
      if (g.is_nonterminal(tmpl->atom)) return check(v, tmpl->atom);
      return leaf_is(s, v, tmpl->atom);
    }
    switch (v->kind) {
      case VKind::CLeaf:
      case VKind::SLeaf:
      case VKind::LeafIte:
      case VKind::Fail:
        return s.false_();
      case VKind::Node:
        return s.mk_and(match_template(v->a, tmpl->l), match_template(v->b, tmpl->r));
      case VKind::Ite:
        return s.mk_and(s.mk_not(v->guard),
                        s.mk_and(match_template(v->b->a, tmpl->l),
                                 match_template(v->b->b, tmpl->r)));
    }
    return s.false_();
  }
};

} // namespace

Formula Grammar::syntax_formula(EvalCtx& ctx, const ValPtr& t, Atom nt) const {
  SyntaxBuilder b{ctx, *this, {}};
  return b.check(t, nt);
}

bool Grammar::derives(const CTreePtr& t, Atom nt) const {
  std::function<bool(const CTreePtr&, const CTreePtr&)> match =
      [&](const CTreePtr& v, const CTreePtr& tmpl) -> bool {
    if (tmpl->leaf) {
      if (is_nonterminal(tmpl->atom)) return derives(v, tmpl->atom);
      return v->leaf && v->atom == tmpl->atom;
    }
    if (v->leaf) return false;
    return match(v->l, tmpl->l) && match(v->r, tmpl->r);
  };
  for (const CTreePtr& p : nonterminal(nt).productions)
    if (match(t, p)) return true;
  return false;
}

BigInt Grammar::count_trees(int depth) const {
  std::map<std::pair<Atom, int>, BigInt> memo;
  std::function<BigInt(Atom, int)> count_nt = [&](Atom nt, int d) -> BigInt {
    if (d <= 0) return 0;
    auto key = std::make_pair(nt, d);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = 0; // recursion cut; rewritten below
    BigInt total = 0;
    std::function<BigInt(const CTreePtr&, int)> count_tmpl = [&](const CTreePtr& t,
                                                                 int dd) -> BigInt {
      if (t->leaf) {
        if (dd < 1) return 0;
        if (is_nonterminal(t->atom)) return count_nt(t->atom, dd);
        return 1;
      }
      if (dd < 2) return 0;
      BigInt l = count_tmpl(t->l, dd - 1);
      if (l == 0) return 0;
      return l * count_tmpl(t->r, dd - 1);
    };
    for (const CTreePtr& p : nonterminal(nt).productions) total += count_tmpl(p, d);
    memo[key] = total;
    return total;
  };
  return count_nt(start(), depth);
}

namespace {

// Pre-analysis of a production template for the enumerator: its fixed size
// contribution and the nonterminal holes with their depth offsets.
struct Hole {
  Atom nt;
  int edge_depth; // edges from the template root
};

struct TemplateInfo {
  size_t base_size = 0;
  std::vector<Hole> holes;
};

void analyze(const Grammar& g, const CTreePtr& t, bool in_tail, int edges, TemplateInfo& out) {
  bool pair_mode = g.encoding() == TreeEncoding::Pair;
  if (t->leaf) {
    if (g.is_nonterminal(t->atom)) {
      out.holes.push_back({t->atom, edges});
    } else if (pair_mode || t->atom != atom("nil")) {
      out.base_size += 1;
    }
    return;
  }
  out.base_size += (pair_mode || !in_tail) ? 1 : 0;
  analyze(g, t->l, false, edges + 1, out);
  analyze(g, t->r, !pair_mode, edges + 1, out);
}

struct Enumerator {
  static constexpr size_t kUnbounded = SIZE_MAX / 4;

  const Grammar& g;
  int max_depth; // levels; negative = unbounded
  std::map<Atom, size_t> min_size;
  std::map<Atom, int> min_depth;
  std::map<Atom, std::vector<TemplateInfo>> infos;
  std::map<std::pair<Atom, int>, size_t> max_size_memo;
  bool stopped = false;

  // Largest redex size reachable for `nt` within `d` levels; saturates at
  // kUnbounded for meaninglessly deep budgets.
  size_t max_size_at(Atom nt, int d) {
    if (d < 1) return 0;
    if (d > 64) return kUnbounded;
    auto key = std::make_pair(nt, d);
    auto it = max_size_memo.find(key);
    if (it != max_size_memo.end()) return it->second;
    max_size_memo[key] = 0;
    size_t best = 0;
    const auto& nts = g.nonterminal(nt);
    for (size_t pi = 0; pi < nts.productions.size(); pi++) {
      const TemplateInfo& ti = infos.at(nt)[pi];
      if (tmpl_own_depth(nts.productions[pi]) > d) continue;
      size_t sz = ti.base_size;
      bool ok = true;
      for (const Hole& h : ti.holes) {
        size_t hs = max_size_at(h.nt, d - h.edge_depth);
        if (hs == 0) { ok = false; break; }
        sz = std::min(sz + hs, kUnbounded);
      }
      if (ok) best = std::max(best, sz);
    }
    max_size_memo[key] = best;
    return best;
  }

  explicit Enumerator(const Grammar& gr, int maxd) : g(gr), max_depth(maxd) {
    for (const auto& nt : g.nonterminals()) {
      min_size[nt.name] = SIZE_MAX;
      min_depth[nt.name] = INT32_MAX;
      auto& v = infos[nt.name];
      for (const auto& p : nt.productions) {
        TemplateInfo ti;
        analyze(g, p, false, 0, ti);
        v.push_back(std::move(ti));
      }
    }
    // fixpoint for minimal size / depth per nonterminal
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& nt : g.nonterminals()) {
        size_t nti = 0;
        for (const auto& p : nt.productions) {
          const TemplateInfo& ti = infos[nt.name][nti++];
          size_t sz = ti.base_size;
          int dep = tmpl_own_depth(p);
          bool ok = true;
          for (const Hole& h : ti.holes) {
            if (min_size[h.nt] == SIZE_MAX) { ok = false; break; }
            sz += min_size[h.nt];
            dep = std::max(dep, h.edge_depth + min_depth[h.nt]);
          }
          if (!ok) continue;
          if (sz < min_size[nt.name]) { min_size[nt.name] = sz; changed = true; }
          if (dep < min_depth[nt.name]) { min_depth[nt.name] = dep; changed = true; }
        }
      }
    }
  }

  static int tmpl_own_depth(const CTreePtr& t) {
    if (t->leaf) return 1;
    return 1 + std::max(tmpl_own_depth(t->l), tmpl_own_depth(t->r));
  }

  // enumerate trees for `nt` with redex size exactly `size` and depth budget
  // `d` levels
  void gen(Atom nt, size_t size, int d, const std::function<void(const CTreePtr&)>& emit) {
    if (stopped) return;
    if (d < 1 || min_size.at(nt) == SIZE_MAX || size < min_size.at(nt)) return;
    if (size > max_size_at(nt, d)) return;
    const auto& nts = g.nonterminal(nt);
    for (size_t pi = 0; pi < nts.productions.size(); pi++) {
      if (stopped) return;
      const CTreePtr& tmpl = nts.productions[pi];
      const TemplateInfo& ti = infos.at(nt)[pi];
      if (ti.base_size > size) continue;
      if (tmpl_own_depth(tmpl) > d) continue;
      std::vector<CTreePtr> parts(ti.holes.size());
      fill_holes(tmpl, ti, 0, size - ti.base_size, d, parts, emit);
    }
  }

  void fill_holes(const CTreePtr& tmpl, const TemplateInfo& ti, size_t hi, size_t budget, int d,
                  std::vector<CTreePtr>& parts, const std::function<void(const CTreePtr&)>& emit) {
    if (stopped) return;
    if (hi == ti.holes.size()) {
      if (budget != 0) return;
      size_t idx = 0;
      emit(substitute(tmpl, parts, idx));
      return;
    }
    const Hole& h = ti.holes[hi];
    size_t rest_min = 0, rest_max = 0;
    for (size_t j = hi + 1; j < ti.holes.size(); j++) {
      const Hole& hj = ti.holes[j];
      rest_min += min_size.at(hj.nt);
      int dj = max_depth < 0 ? INT32_MAX / 2 : d - hj.edge_depth;
      rest_max = std::min(rest_max + max_size_at(hj.nt, std::min(dj, 65)), kUnbounded);
    }
    if (budget < rest_min) return;
    size_t avail = budget - rest_min;
    int sub_d = max_depth < 0 ? INT32_MAX / 2 : d - h.edge_depth;
    avail = std::min(avail, max_size_at(h.nt, std::min(sub_d, 65)));
    for (size_t sz = min_size.at(h.nt); sz <= avail; sz++) {
      if (budget - sz > rest_max) continue;
      gen(h.nt, sz, sub_d, [&](const CTreePtr& sub) {
        parts[hi] = sub;
        fill_holes(tmpl, ti, hi + 1, budget - sz, d, parts, emit);
      });
      if (stopped) return;
    }
  }

  CTreePtr substitute(const CTreePtr& tmpl, const std::vector<CTreePtr>& parts,
                      size_t& idx) const {
    if (tmpl->leaf) {
      if (g.is_nonterminal(tmpl->atom)) return parts[idx++];
      return tmpl;
    }
    CTreePtr l = substitute(tmpl->l, parts, idx);
    CTreePtr r = substitute(tmpl->r, parts, idx);
    return cnode(std::move(l), std::move(r));
  }
};

} // namespace

void Grammar::enumerate_trees(size_t max_size, int max_depth,
                              const std::function<bool(const CTreePtr&)>& fn) const {
  Enumerator en(*this, max_depth);
  if (en.min_size.at(start()) == SIZE_MAX) return;
  int d = max_depth < 0 ? INT32_MAX / 2 : max_depth;
  for (size_t s = en.min_size.at(start()); s <= max_size && !en.stopped; s++) {
    en.gen(start(), s, d, [&](const CTreePtr& t) {
      if (en.stopped) return;
      if (!fn(t)) en.stopped = true;
    });
  }
}

} // namespace bonsai
