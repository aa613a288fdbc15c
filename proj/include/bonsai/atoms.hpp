#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bonsai {

// Interned leaf symbols. Atom ids are process-global and stable for the
// lifetime of the process; all tree leaves, vocabularies and constant
// domains speak in Atom ids rather than strings.
using Atom = uint32_t;

class AtomTable {
public:
  static AtomTable& instance() {
    static AtomTable t;
    return t;
  }

  Atom intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    Atom id = static_cast<Atom>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  const std::string& name(Atom a) const { return names_.at(a); }

private:
  AtomTable() = default;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Atom> ids_;
};

inline Atom atom(std::string_view name) { return AtomTable::instance().intern(name); }
inline const std::string& atom_name(Atom a) { return AtomTable::instance().name(a); }

} // namespace bonsai
