#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctp/syntax.hpp"
#include "ctp/unify.hpp"

namespace ctp {

// Integer action encoding: tag * kVariantStride + clause * kMaxLiterals + lit.
// Reductions store the path position in the clause slot. The constants are
// normative: enumeration order and tie-breaks depend on encoding order.
inline constexpr uint64_t kMaxLiterals = 1024;
inline constexpr uint64_t kVariantStride = uint64_t(1) << 32;

enum class ActionKind : uint8_t { Start = 0, Extension = 1, Reduction = 2 };

struct Action {
  uint64_t encoding = 0;

  static Action start(int clause_index) {
    return {uint64_t(ActionKind::Start) * kVariantStride +
            uint64_t(clause_index) * kMaxLiterals};
  }
  static Action extension(int clause_index, int literal_index) {
    return {uint64_t(ActionKind::Extension) * kVariantStride +
            uint64_t(clause_index) * kMaxLiterals + uint64_t(literal_index)};
  }
  static Action reduction(int path_position) {
    return {uint64_t(ActionKind::Reduction) * kVariantStride +
            uint64_t(path_position) * kMaxLiterals};
  }

  ActionKind kind() const {
    return static_cast<ActionKind>(encoding / kVariantStride);
  }
  int clause_index() const {
    return static_cast<int>((encoding % kVariantStride) / kMaxLiterals);
  }
  int literal_index() const { return static_cast<int>(encoding % kMaxLiterals); }
  int path_position() const { return clause_index(); }

  bool operator==(const Action& o) const { return encoding == o.encoding; }
  std::string describe() const;
};

// Immutable shared spine of ancestor literals; literals are stored with
// global variable ids, uninstantiated (the substitution applies lazily).
struct PathNode {
  Literal literal;
  std::shared_ptr<const PathNode> parent;
  uint32_t length = 0;  // number of literals root..here
};
using PathPtr = std::shared_ptr<const PathNode>;

// Path literals root-first.
std::vector<const Literal*> path_literals(const PathPtr& path);

struct Goal {
  Literal literal;
  PathPtr path;

  uint32_t depth() const { return path ? path->length + 1 : 1; }
};

// Explicit proof state: goal stack, substitution with trail, counters.
// Single-owner mutable; every applied action records an undo entry so MCTS
// descents can rewind in place.
class TableauState {
 public:
  using Mark = size_t;

  bool closed() const { return goals_.empty(); }
  size_t open_goal_count() const { return goals_.size(); }
  uint64_t inference_count() const { return inference_count_; }
  const std::vector<Goal>& goals() const { return goals_; }
  const Goal& current_goal() const {
    if (goals_.empty()) throw std::logic_error("closed tableau has no goal");
    return goals_.back();
  }
  const Substitution& substitution() const { return subst_; }
  const std::vector<Action>& applied_actions() const { return applied_; }

  Mark mark() const { return undo_.size(); }

  // Applies a start / extension / reduction step. The action must come from
  // start_actions / applicable_actions; an inapplicable action is a contract
  // violation and throws.
  void apply(const Action& action, const Problem& problem);

  // Rewinds to an earlier mark on this lineage.
  void undo_to(Mark m);

  bool structurally_equal(const TableauState& other) const;

 private:
  struct UndoRecord {
    Goal popped;
    bool had_popped = false;
    uint32_t pushed = 0;
    Substitution::Mark trail_mark = 0;
    uint64_t next_var = 0;
  };

  friend std::vector<Action> applicable_actions(TableauState&,
                                                const Problem&);

  Literal instantiate(const Literal& lit, uint64_t var_base) const;

  std::vector<Goal> goals_;
  Substitution subst_;
  uint64_t inference_count_ = 0;
  uint64_t next_var_ = 0;
  std::vector<Action> applied_;
  std::vector<UndoRecord> undo_;
};

// One start action per start clause, in input order.
std::vector<Action> start_actions(const Problem& problem);

// All applicable actions for the current goal: reductions by ascending path
// position, then extensions by ascending (clause, literal). Every listed
// action is guaranteed to apply.
std::vector<Action> applicable_actions(TableauState& state,
                                       const Problem& problem);

// Proof file: one action per line (decoded form), then the final
// substitution as comments. Consumed by the CLI `check` command.
std::string format_proof(const std::vector<Action>& actions,
                         const TableauState& final_state,
                         const Problem& problem);
std::vector<Action> parse_proof(const std::string& text);

}  // namespace ctp
