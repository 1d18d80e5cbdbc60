#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ctp/syntax.hpp"

namespace ctp {

// Binding store with a chronological trail. Unification failure and search
// backtracking both rewind to a trail mark.
class Substitution {
 public:
  using Mark = size_t;

  Mark mark() const { return trail_.size(); }

  void undo_to(Mark m) {
    while (trail_.size() > m) {
      bindings_.erase(trail_.back());
      trail_.pop_back();
    }
  }

  const Term* lookup(uint64_t var) const {
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
  }

  void bind(uint64_t var, Term value) {
    bindings_.emplace(var, std::move(value));
    trail_.push_back(var);
  }

  size_t size() const { return bindings_.size(); }

  // Follows variable bindings until a non-variable or an unbound variable.
  const Term& deref(const Term& t) const {
    const Term* cur = &t;
    while (cur->is_var()) {
      const Term* next = lookup(cur->var);
      if (!next) break;
      cur = next;
    }
    return *cur;
  }

  // Fully applies the substitution to a term / literal.
  Term apply(const Term& t) const;
  Literal apply(const Literal& l) const;

  // Bindings sorted by variable id.
  std::vector<std::pair<uint64_t, Term>> bindings_sorted() const;

 private:
  std::unordered_map<uint64_t, Term> bindings_;
  std::vector<uint64_t> trail_;
};

// MGU with occurs check. On success the substitution is extended; on failure
// it is rewound to its state at entry.
bool unify(const Term& a, const Term& b, Substitution& subst);
bool unify_args(const std::vector<Term>& a, const std::vector<Term>& b,
                Substitution& subst);

// Complementary connection test: opposite polarity, same predicate, unifiable
// argument lists. Bindings stay on success, are rewound on failure.
bool connect(const Literal& goal, const Literal& other, Substitution& subst);

}  // namespace ctp
