#include "ctp/tableau.hpp"

#include <algorithm>
#include <sstream>

namespace ctp {

std::string Action::describe() const {
  switch (kind()) {
    case ActionKind::Start:
      return "start " + std::to_string(clause_index());
    case ActionKind::Extension:
      return "extend " + std::to_string(clause_index()) + " " +
             std::to_string(literal_index());
    case ActionKind::Reduction:
      return "reduce " + std::to_string(path_position());
  }
  return "?";
}

std::vector<const Literal*> path_literals(const PathPtr& path) {
  std::vector<const Literal*> out;
  for (const PathNode* n = path.get(); n; n = n->parent.get())
    out.push_back(&n->literal);
  std::reverse(out.begin(), out.end());
  return out;
}

Literal TableauState::instantiate(const Literal& lit, uint64_t var_base) const {
  struct Shift {
    uint64_t base;
    Term term(const Term& t) const {
      if (t.is_var()) return Term::make_var(base + t.var);
      Term out = Term::make_app(t.sym);
      out.args.reserve(t.args.size());
      for (const Term& a : t.args) out.args.push_back(term(a));
      return out;
    }
  } shift{var_base};
  Literal out;
  out.positive = lit.positive;
  out.predicate = lit.predicate;
  out.args.reserve(lit.args.size());
  for (const Term& a : lit.args) out.args.push_back(shift.term(a));
  return out;
}

void TableauState::apply(const Action& action, const Problem& problem) {
  UndoRecord rec;
  rec.trail_mark = subst_.mark();
  rec.next_var = next_var_;

  switch (action.kind()) {
    case ActionKind::Start: {
      if (!goals_.empty() || !applied_.empty())
        throw std::logic_error("start action on non-initial state");
      const Clause& clause = problem.clauses.at(action.clause_index());
      uint64_t base = next_var_;
      next_var_ += clause.var_count;
      for (auto it = clause.literals.rbegin(); it != clause.literals.rend(); ++it)
        goals_.push_back(Goal{instantiate(*it, base), nullptr});
      rec.pushed = static_cast<uint32_t>(clause.literals.size());
      break;
    }
    case ActionKind::Extension: {
      Goal goal = current_goal();
      const Clause& clause = problem.clauses.at(action.clause_index());
      int li = action.literal_index();
      uint64_t base = next_var_;
      Literal connecting = instantiate(clause.literals.at(li), base);
      if (!connect(goal.literal, connecting, subst_))
        throw std::logic_error("inapplicable extension: " + action.describe());
      next_var_ += clause.var_count;
      goals_.pop_back();
      auto ext_path = std::make_shared<PathNode>(
          PathNode{goal.literal, goal.path, goal.path ? goal.path->length + 1 : 1});
      uint32_t pushed = 0;
      for (int i = static_cast<int>(clause.literals.size()) - 1; i >= 0; --i) {
        if (i == li) continue;
        goals_.push_back(Goal{instantiate(clause.literals[i], base), ext_path});
        ++pushed;
      }
      rec.popped = std::move(goal);
      rec.had_popped = true;
      rec.pushed = pushed;
      break;
    }
    case ActionKind::Reduction: {
      Goal goal = current_goal();
      auto lits = path_literals(goal.path);
      int pos = action.path_position();
      if (pos < 0 || pos >= static_cast<int>(lits.size()))
        throw std::logic_error("reduction position out of range");
      if (!connect(goal.literal, *lits[pos], subst_))
        throw std::logic_error("inapplicable reduction: " + action.describe());
      goals_.pop_back();
      rec.popped = std::move(goal);
      rec.had_popped = true;
      break;
    }
  }

  ++inference_count_;
  applied_.push_back(action);
  undo_.push_back(std::move(rec));
}

void TableauState::undo_to(Mark m) {
  if (m > undo_.size()) throw std::logic_error("stale undo mark");
  while (undo_.size() > m) {
    UndoRecord& rec = undo_.back();
    goals_.resize(goals_.size() - rec.pushed);
    if (rec.had_popped) goals_.push_back(std::move(rec.popped));
    subst_.undo_to(rec.trail_mark);
    next_var_ = rec.next_var;
    --inference_count_;
    applied_.pop_back();
    undo_.pop_back();
  }
}

bool TableauState::structurally_equal(const TableauState& other) const {
  if (inference_count_ != other.inference_count_) return false;
  if (next_var_ != other.next_var_) return false;
  if (applied_ != other.applied_) return false;
  if (goals_.size() != other.goals_.size()) return false;
  for (size_t i = 0; i < goals_.size(); ++i) {
    if (subst_.apply(goals_[i].literal) != other.subst_.apply(other.goals_[i].literal))
      return false;
    auto pa = path_literals(goals_[i].path);
    auto pb = path_literals(other.goals_[i].path);
    if (pa.size() != pb.size()) return false;
    for (size_t j = 0; j < pa.size(); ++j)
      if (subst_.apply(*pa[j]) != other.subst_.apply(*pb[j])) return false;
  }
  return subst_.size() == other.subst_.size();
}

std::vector<Action> start_actions(const Problem& problem) {
  std::vector<Action> out;
  out.reserve(problem.start_clause_indices.size());
  for (int idx : problem.start_clause_indices) out.push_back(Action::start(idx));
  return out;
}

std::vector<Action> applicable_actions(TableauState& state,
                                       const Problem& problem) {
  std::vector<Action> out;
  const Goal& goal = state.current_goal();
  Substitution& subst = state.subst_;
  auto m = subst.mark();

  auto lits = path_literals(goal.path);
  for (size_t pos = 0; pos < lits.size(); ++pos) {
    if (connect(goal.literal, *lits[pos], subst)) {
      subst.undo_to(m);
      out.push_back(Action::reduction(static_cast<int>(pos)));
    }
  }

  for (const Clause& clause : problem.clauses) {
    for (size_t li = 0; li < clause.literals.size(); ++li) {
      Literal fresh = state.instantiate(clause.literals[li], state.next_var_);
      if (connect(goal.literal, fresh, subst)) {
        subst.undo_to(m);
        out.push_back(
            Action::extension(clause.index, static_cast<int>(li)));
      }
    }
  }
  return out;
}

std::string format_proof(const std::vector<Action>& actions,
                         const TableauState& final_state,
                         const Problem& problem) {
  std::ostringstream out;
  out << "% action encoding: stride=" << kVariantStride
      << " max_literals=" << kMaxLiterals << "\n";
  for (const Action& a : actions) out << a.describe() << "\n";
  for (const auto& [var, term] : final_state.substitution().bindings_sorted())
    out << "% subst X" << var << " = "
        << to_string(final_state.substitution().apply(term), problem.symbols)
        << "\n";
  return out.str();
}

std::vector<Action> parse_proof(const std::string& text) {
  std::vector<Action> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "start") {
      int c;
      ls >> c;
      out.push_back(Action::start(c));
    } else if (kw == "extend") {
      int c, l;
      ls >> c >> l;
      out.push_back(Action::extension(c, l));
    } else if (kw == "reduce") {
      int p;
      ls >> p;
      out.push_back(Action::reduction(p));
    } else {
      throw std::runtime_error("bad proof line " + std::to_string(lineno) +
                               ": " + line);
    }
  }
  return out;
}

}  // namespace ctp
