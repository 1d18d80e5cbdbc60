#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ctp {

enum class SymbolKind { Function, Predicate };

inline std::string_view kind_tag(SymbolKind k) {
  return k == SymbolKind::Function ? "fun" : "pred";
}

// 64-bit FNV-1a over the key "name/arity/kind".
inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t symbol_id(std::string_view name, uint32_t arity, SymbolKind kind) {
  std::string key;
  key.reserve(name.size() + 12);
  key.append(name);
  key.push_back('/');
  key.append(std::to_string(arity));
  key.push_back('/');
  key.append(kind_tag(kind));
  uint64_t id = fnv1a64(key);
  if (id == 0) id = 0x9e3779b97f4a7c15ull;  // reserve 0 for variables
  return id;
}

struct SymbolInfo {
  std::string name;
  uint32_t arity = 0;
  SymbolKind kind = SymbolKind::Function;
};

// Interns (name, arity, kind) triples to stable 64-bit ids. A 64-bit
// collision between two distinct triples is reported as a hard error.
class SymbolTable {
 public:
  uint64_t intern(std::string_view name, uint32_t arity, SymbolKind kind) {
    uint64_t id = symbol_id(name, arity, kind);
    auto it = table_.find(id);
    if (it == table_.end()) {
      table_.emplace(id, SymbolInfo{std::string(name), arity, kind});
    } else {
      const SymbolInfo& info = it->second;
      if (info.name != name || info.arity != arity || info.kind != kind)
        throw std::runtime_error("symbol id collision: " + info.name + " vs " +
                                 std::string(name));
    }
    return id;
  }

  const SymbolInfo& info(uint64_t id) const {
    auto it = table_.find(id);
    if (it == table_.end()) throw std::runtime_error("unknown symbol id");
    return it->second;
  }

  bool contains(uint64_t id) const { return table_.count(id) != 0; }
  size_t size() const { return table_.size(); }

 private:
  std::unordered_map<uint64_t, SymbolInfo> table_;
};

}  // namespace ctp
