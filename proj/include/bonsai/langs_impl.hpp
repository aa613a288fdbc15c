#pragma once

#include "bonsai/langs.hpp"

#include <optional>
#include <type_traits>
#include <vector>

namespace bonsai::langs {

// Elements of a nil-terminated list tree, or nullopt for leaves and
// improper chains.
inline std::optional<std::vector<CTreePtr>> list_parts(const CTreePtr& t) {
  if (t->leaf) return std::nullopt;
  std::vector<CTreePtr> out;
  const ConcreteTree* cur = t.get();
  while (true) {
    out.push_back(cur->l);
    if (cur->r->leaf) {
      if (cur->r->atom != atom("nil")) return std::nullopt;
      return out;
    }
    cur = cur->r.get();
  }
}

LangDef make_arith();
LangDef make_stlc();
LangDef make_mini();
LangDef make_fv();

} // namespace bonsai::langs
