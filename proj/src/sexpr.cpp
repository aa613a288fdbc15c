#include "bonsai/sexpr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace bonsai {

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') pos++;
      } else if (isspace(static_cast<unsigned char>(c))) {
        pos++;
      } else {
        break;
      }
    }
  }

  bool done() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of input");
    return text[pos];
  }

  std::string token() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '[' ||
          c == ']' || c == ';')
        break;
      pos++;
    }
    if (pos == start) throw ParseError("empty token at position " + std::to_string(start));
    return text.substr(start, pos - start);
  }

  // '[' and ']' are interchangeable with parentheses, as long as they pair up
  Sexpr parse() {
    char c = peek();
    if (c == ')' || c == ']') throw ParseError("unexpected closer");
    if (c != '(' && c != '[') {
      std::string t = token();
      if (t == "'") throw ParseError("quote is not part of this syntax");
      return Sexpr::mk_atom(atom(t));
    }
    char closer = (c == '(') ? ')' : ']';
    pos++;
    Sexpr out;
    while (true) {
      c = peek();
      if (c == ')' || c == ']') {
        if (c != closer) throw ParseError("mismatched bracket");
        pos++;
        return out;
      }
      // dotted tail
      if (c == '.' && pos + 1 < text.size() &&
          (isspace(static_cast<unsigned char>(text[pos + 1])) || text[pos + 1] == '(')) {
        pos++;
        if (out.items.empty()) throw ParseError("dotted tail without a head");
        out.tail = std::make_shared<Sexpr>(parse());
        if (peek() != closer) throw ParseError("expected closer after dotted tail");
        pos++;
        return out;
      }
      out.items.push_back(parse());
    }
  }
};

} // namespace

Sexpr parse_sexpr(const std::string& text) {
  Lexer lx{text};
  Sexpr s = lx.parse();
  if (!lx.done()) throw ParseError("trailing input after s-expression");
  return s;
}

std::vector<Sexpr> parse_sexprs(const std::string& text) {
  Lexer lx{text};
  std::vector<Sexpr> out;
  while (!lx.done()) out.push_back(lx.parse());
  return out;
}

std::string sexpr_to_string(const Sexpr& s) {
  if (s.is_atom) return atom_name(s.atom);
  std::string out = "(";
  for (size_t i = 0; i < s.items.size(); i++) {
    if (i) out += " ";
    out += sexpr_to_string(s.items[i]);
  }
  if (s.tail) {
    out += " . " + sexpr_to_string(*s.tail);
  }
  out += ")";
  return out;
}

CTreePtr cnode(CTreePtr l, CTreePtr r) {
  auto t = std::make_shared<ConcreteTree>();
  t->leaf = false;
  t->l = std::move(l);
  t->r = std::move(r);
  return t;
}

CTreePtr catom(Atom a) {
  auto t = std::make_shared<ConcreteTree>();
  t->leaf = true;
  t->atom = a;
  return t;
}

bool ctree_equal(const CTreePtr& a, const CTreePtr& b) {
  if (a == b) return true;
  if (a->leaf != b->leaf) return false;
  if (a->leaf) return a->atom == b->atom;
  return ctree_equal(a->l, b->l) && ctree_equal(a->r, b->r);
}

size_t ctree_depth(const CTreePtr& t) {
  if (t->leaf) return 1;
  return 1 + std::max(ctree_depth(t->l), ctree_depth(t->r));
}

namespace {

void check_vocab(Atom a, const std::vector<Atom>* vocab, TreeEncoding enc) {
  if (!vocab) return;
  if (enc == TreeEncoding::List && a == atom("nil")) return;
  if (std::find(vocab->begin(), vocab->end(), a) == vocab->end())
    throw BadVocabAtom("atom '" + atom_name(a) + "' is outside the vocabulary");
}

} // namespace

CTreePtr embed_sexpr(const Sexpr& s, TreeEncoding enc, const std::vector<Atom>* vocab) {
  if (s.is_atom) {
    check_vocab(s.atom, vocab, enc);
    return catom(s.atom);
  }
  if (enc == TreeEncoding::List) {
    CTreePtr acc;
    if (s.tail) {
      acc = embed_sexpr(*s.tail, enc, vocab);
    } else {
      check_vocab(atom("nil"), vocab, enc);
      acc = catom(atom("nil"));
    }
    for (auto it = s.items.rbegin(); it != s.items.rend(); ++it)
      acc = cnode(embed_sexpr(*it, enc, vocab), acc);
    return acc;
  }
  // Pair mode: right fold with no terminator; needs at least two elements.
  std::vector<CTreePtr> parts;
  for (const Sexpr& e : s.items) parts.push_back(embed_sexpr(e, enc, vocab));
  if (s.tail) parts.push_back(embed_sexpr(*s.tail, enc, vocab));
  if (parts.size() < 2) throw ParseError("pair-encoded list needs at least two elements");
  CTreePtr acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = cnode(parts[i], acc);
  return acc;
}

CTreePtr embed_sexpr(const std::string& text, TreeEncoding enc, const std::vector<Atom>* vocab) {
  return embed_sexpr(parse_sexpr(text), enc, vocab);
}

namespace {

void render_list(const CTreePtr& t, std::string& out) {
  if (t->leaf) {
    out += atom_name(t->atom);
    return;
  }
  out += "(";
  const ConcreteTree* cur = t.get();
  bool first = true;
  while (true) {
    if (!first) out += " ";
    first = false;
    render_list(cur->l, out);
    const ConcreteTree* rest = cur->r.get();
    if (rest->leaf) {
      if (rest->atom != atom("nil")) {
        out += " . ";
        out += atom_name(rest->atom);
      }
      break;
    }
    cur = rest;
  }
  out += ")";
}

void render_pair(const CTreePtr& t, std::string& out) {
  if (t->leaf) {
    out += atom_name(t->atom);
    return;
  }
  out += "(";
  render_pair(t->l, out);
  out += " ";
  render_pair(t->r, out);
  out += ")";
}

size_t size_list(const CTreePtr& t, bool in_tail) {
  if (t->leaf) return t->atom == atom("nil") ? 0 : 1;
  size_t self = in_tail ? 0 : 1; // a list is counted once, at its head node
  return self + size_list(t->l, false) + size_list(t->r, true);
}

} // namespace

std::string render_sexpr(const CTreePtr& t, TreeEncoding enc) {
  std::string out;
  if (enc == TreeEncoding::List) render_list(t, out);
  else render_pair(t, out);
  return out;
}

size_t redex_size(const CTreePtr& t, TreeEncoding enc) {
  if (enc == TreeEncoding::List) return size_list(t, false);
  if (t->leaf) return 1;
  return 1 + redex_size(t->l, enc) + redex_size(t->r, enc);
}

} // namespace bonsai
