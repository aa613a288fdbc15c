#pragma once

#include "bonsai/tree.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bonsai {

using BigInt = boost::multiprecision::cpp_int;

struct GrammarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// BNF-style grammar: one s-expression of the form ([nt prod ...] ...).
// Production templates are trees whose leaves are terminals or nonterminal
// references; the first nonterminal is the start symbol.
class Grammar {
public:
  struct Nonterminal {
    Atom name;
    std::vector<CTreePtr> productions;
  };

  static Grammar parse(const std::string& text, TreeEncoding enc);

  TreeEncoding encoding() const { return enc_; }
  Atom start() const { return nts_.front().name; }
  const std::vector<Nonterminal>& nonterminals() const { return nts_; }
  bool is_nonterminal(Atom a) const { return nt_index_.count(a) > 0; }
  const Nonterminal& nonterminal(Atom a) const { return nts_[nt_index_.at(a)]; }

  // All terminals in order of first appearance, with the reserved `nil`
  // appended when absent.
  const std::vector<Atom>& vocabulary() const { return vocab_; }

  // Formula satisfied exactly by the models under which `t` concretizes to a
  // tree derivable from `nt`.
  Formula syntax_formula(EvalCtx& ctx, const ValPtr& t, Atom nt) const;
  Formula syntax_formula(EvalCtx& ctx, const ValPtr& t) const {
    return syntax_formula(ctx, t, start());
  }

  // Is a concrete tree derivable from `nt`?
  bool derives(const CTreePtr& t, Atom nt) const;
  bool derives(const CTreePtr& t) const { return derives(t, start()); }

  // Exact count of derivable trees that embed within `depth` levels
  // (a lone leaf occupies one level).
  BigInt count_trees(int depth) const;

  // Streams every derivable tree with redex_size <= max_size (and embedding
  // depth <= max_depth when nonnegative), smallest sizes first, no
  // duplicates. Stops early when the callback returns false.
  void enumerate_trees(size_t max_size, int max_depth,
                       const std::function<bool(const CTreePtr&)>& fn) const;

private:
  TreeEncoding enc_ = TreeEncoding::List;
  std::vector<Nonterminal> nts_;
  std::map<Atom, size_t> nt_index_;
  std::vector<Atom> vocab_;

  void validate() const;
};

} // namespace bonsai
