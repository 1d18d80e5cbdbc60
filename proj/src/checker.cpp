#include "ctp/checker.hpp"

#include <map>

// Replays a proof with its own term machinery: eager copy-on-try bindings in
// a std::map, no trail, no sharing with the TableauState implementation.

namespace ctp {
namespace {

using Bindings = std::map<uint64_t, Term>;

const Term& walk(const Term& t, const Bindings& b) {
  const Term* cur = &t;
  while (cur->is_var()) {
    auto it = b.find(cur->var);
    if (it == b.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool occurs_in(uint64_t var, const Term& t, const Bindings& b) {
  const Term& d = walk(t, b);
  if (d.is_var()) return d.var == var;
  for (const Term& a : d.args)
    if (occurs_in(var, a, b)) return true;
  return false;
}

bool mgu(const Term& x, const Term& y, Bindings& b) {
  const Term dx = walk(x, b);
  const Term dy = walk(y, b);
  if (dx.is_var()) {
    if (dy.is_var() && dy.var == dx.var) return true;
    if (occurs_in(dx.var, dy, b)) return false;
    b[dx.var] = dy;
    return true;
  }
  if (dy.is_var()) {
    if (occurs_in(dy.var, dx, b)) return false;
    b[dy.var] = dx;
    return true;
  }
  if (dx.sym != dy.sym || dx.args.size() != dy.args.size()) return false;
  for (size_t i = 0; i < dx.args.size(); ++i)
    if (!mgu(dx.args[i], dy.args[i], b)) return false;
  return true;
}

bool complementary(const Literal& g, const Literal& o, Bindings& b) {
  if (g.positive == o.positive || g.predicate != o.predicate) return false;
  if (g.args.size() != o.args.size()) return false;
  Bindings attempt = b;
  for (size_t i = 0; i < g.args.size(); ++i)
    if (!mgu(g.args[i], o.args[i], attempt)) return false;
  b = std::move(attempt);
  return true;
}

Term shift_term(const Term& t, uint64_t base) {
  if (t.is_var()) return Term::make_var(base + t.var);
  Term out = Term::make_app(t.sym);
  for (const Term& a : t.args) out.args.push_back(shift_term(a, base));
  return out;
}

Literal shift_literal(const Literal& l, uint64_t base) {
  Literal out;
  out.positive = l.positive;
  out.predicate = l.predicate;
  for (const Term& a : l.args) out.args.push_back(shift_term(a, base));
  return out;
}

struct CheckGoal {
  Literal literal;
  std::vector<Literal> path;  // root-first
};

void fail(std::string* diag, const std::string& msg) {
  if (diag) *diag = msg;
}

}  // namespace

bool check_proof(const Problem& problem, const std::vector<Action>& actions,
                 std::string* diagnostic) {
  std::vector<CheckGoal> goals;
  Bindings bindings;
  uint64_t next_var = 0;
  bool started = false;

  for (size_t step = 0; step < actions.size(); ++step) {
    const Action& a = actions[step];
    std::string where = "step " + std::to_string(step) + " (" + a.describe() + "): ";

    if (a.kind() == ActionKind::Start) {
      if (started) {
        fail(diagnostic, where + "start after first action");
        return false;
      }
      int ci = a.clause_index();
      if (ci < 0 || ci >= static_cast<int>(problem.clauses.size())) {
        fail(diagnostic, where + "clause index out of range");
        return false;
      }
      const Clause& c = problem.clauses[ci];
      bool is_start = false;
      for (int s : problem.start_clause_indices) is_start |= (s == ci);
      if (!is_start) {
        fail(diagnostic, where + "clause is not a start clause");
        return false;
      }
      for (auto it = c.literals.rbegin(); it != c.literals.rend(); ++it)
        goals.push_back(CheckGoal{shift_literal(*it, next_var), {}});
      next_var += c.var_count;
      started = true;
      continue;
    }

    if (!started || goals.empty()) {
      fail(diagnostic, where + "no current goal");
      return false;
    }
    CheckGoal goal = goals.back();

    if (a.kind() == ActionKind::Extension) {
      int ci = a.clause_index();
      int li = a.literal_index();
      if (ci < 0 || ci >= static_cast<int>(problem.clauses.size())) {
        fail(diagnostic, where + "clause index out of range");
        return false;
      }
      const Clause& c = problem.clauses[ci];
      if (li < 0 || li >= static_cast<int>(c.literals.size())) {
        fail(diagnostic, where + "literal index out of range");
        return false;
      }
      Literal connecting = shift_literal(c.literals[li], next_var);
      if (!complementary(goal.literal, connecting, bindings)) {
        fail(diagnostic, where + "extension literal not complementary");
        return false;
      }
      goals.pop_back();
      std::vector<Literal> new_path = goal.path;
      new_path.push_back(goal.literal);
      for (int i = static_cast<int>(c.literals.size()) - 1; i >= 0; --i) {
        if (i == li) continue;
        goals.push_back(CheckGoal{shift_literal(c.literals[i], next_var), new_path});
      }
      next_var += c.var_count;
    } else {  // reduction
      int pos = a.path_position();
      if (pos < 0 || pos >= static_cast<int>(goal.path.size())) {
        fail(diagnostic, where + "path position out of range");
        return false;
      }
      if (!complementary(goal.literal, goal.path[pos], bindings)) {
        fail(diagnostic, where + "path literal not complementary");
        return false;
      }
      goals.pop_back();
    }
  }

  if (!started) {
    fail(diagnostic, "no start action");
    return false;
  }
  if (!goals.empty()) {
    fail(diagnostic, std::to_string(goals.size()) + " branch(es) left open");
    return false;
  }
  return true;
}

}  // namespace ctp
