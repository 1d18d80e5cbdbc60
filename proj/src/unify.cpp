#include "ctp/unify.hpp"

#include <algorithm>

namespace ctp {

Term Substitution::apply(const Term& t) const {
  const Term& d = deref(t);
  if (d.is_var()) return d;
  Term out = Term::make_app(d.sym);
  out.args.reserve(d.args.size());
  for (const Term& a : d.args) out.args.push_back(apply(a));
  return out;
}

Literal Substitution::apply(const Literal& l) const {
  Literal out;
  out.positive = l.positive;
  out.predicate = l.predicate;
  out.args.reserve(l.args.size());
  for (const Term& a : l.args) out.args.push_back(apply(a));
  return out;
}

std::vector<std::pair<uint64_t, Term>> Substitution::bindings_sorted() const {
  std::vector<std::pair<uint64_t, Term>> out(bindings_.begin(), bindings_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace {

bool occurs(uint64_t var, const Term& t, const Substitution& subst) {
  const Term& d = subst.deref(t);
  if (d.is_var()) return d.var == var;
  for (const Term& a : d.args)
    if (occurs(var, a, subst)) return true;
  return false;
}

bool unify_rec(const Term& a, const Term& b, Substitution& subst) {
  const Term& da = subst.deref(a);
  const Term& db = subst.deref(b);
  if (da.is_var()) {
    if (db.is_var() && db.var == da.var) return true;
    if (occurs(da.var, db, subst)) return false;
    subst.bind(da.var, db);
    return true;
  }
  if (db.is_var()) {
    if (occurs(db.var, da, subst)) return false;
    subst.bind(db.var, da);
    return true;
  }
  if (da.sym != db.sym || da.args.size() != db.args.size()) return false;
  for (size_t i = 0; i < da.args.size(); ++i)
    if (!unify_rec(da.args[i], db.args[i], subst)) return false;
  return true;
}

}  // namespace

bool unify(const Term& a, const Term& b, Substitution& subst) {
  auto m = subst.mark();
  if (unify_rec(a, b, subst)) return true;
  subst.undo_to(m);
  return false;
}

bool unify_args(const std::vector<Term>& a, const std::vector<Term>& b,
                Substitution& subst) {
  if (a.size() != b.size()) return false;
  auto m = subst.mark();
  for (size_t i = 0; i < a.size(); ++i) {
    if (!unify_rec(a[i], b[i], subst)) {
      subst.undo_to(m);
      return false;
    }
  }
  return true;
}

bool connect(const Literal& goal, const Literal& other, Substitution& subst) {
  if (goal.positive == other.positive) return false;
  if (goal.predicate != other.predicate) return false;
  return unify_args(goal.args, other.args, subst);
}

}  // namespace ctp
