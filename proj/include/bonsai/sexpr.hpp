#pragma once

#include "bonsai/atoms.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bonsai {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadVocabAtom : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed s-expression: an atom or a (possibly dotted) list.
struct Sexpr {
  bool is_atom = false;
  Atom atom = 0;
  std::vector<Sexpr> items;          // proper elements
  std::shared_ptr<Sexpr> tail;       // non-nil dotted tail, if any

  static Sexpr mk_atom(Atom a) {
    Sexpr s;
    s.is_atom = true;
    s.atom = a;
    return s;
  }
};

// Parses one s-expression; throws ParseError on junk or trailing input.
Sexpr parse_sexpr(const std::string& text);
// Parses a sequence of top-level s-expressions.
std::vector<Sexpr> parse_sexprs(const std::string& text);
std::string sexpr_to_string(const Sexpr& s);

// A concrete binary tree over atoms.
struct ConcreteTree;
using CTreePtr = std::shared_ptr<const ConcreteTree>;

struct ConcreteTree {
  bool leaf;
  Atom atom = 0;
  CTreePtr l, r;
};

CTreePtr cnode(CTreePtr l, CTreePtr r);
CTreePtr catom(Atom a);
bool ctree_equal(const CTreePtr& a, const CTreePtr& b);
size_t ctree_depth(const CTreePtr& t); // levels; a lone leaf has depth 1

// How a language's s-expressions map onto binary trees.
//
//   List: (a b c) becomes a right-nested chain terminated by a reserved
//         `nil` leaf; `nil` terminators are size-free.
//   Pair: (x1 x2 ... xn) folds right into bare pairs with no terminator;
//         rendering is strictly binary.
enum class TreeEncoding { List, Pair };

// Sexpr -> tree under the given encoding. Leaf atoms must be members of
// `vocab` when a vocabulary is supplied (nil is always allowed in List mode).
CTreePtr embed_sexpr(const Sexpr& s, TreeEncoding enc,
                     const std::vector<Atom>* vocab = nullptr);
CTreePtr embed_sexpr(const std::string& text, TreeEncoding enc,
                     const std::vector<Atom>* vocab = nullptr);

// Left inverse of embed_sexpr on embedded trees; total on all trees.
std::string render_sexpr(const CTreePtr& t, TreeEncoding enc);

// Counterexample size metric: one per atom plus one per list, with List-mode
// nil terminators free.
size_t redex_size(const CTreePtr& t, TreeEncoding enc);

} // namespace bonsai
