#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctp/learning.hpp"
#include "ctp/tableau.hpp"

namespace ctp {

// Splittable 64-bit PRNG; one stream per problem derived from a master seed.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return next() % n; }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

enum class SearchMode { Bare, Uct, UctPolicy, UctValue, UctPolicyValue };

std::string to_string(SearchMode m);
SearchMode search_mode_from_string(const std::string& s);

struct SearchNode;
using ChildSelector =
    std::function<int(const std::vector<std::unique_ptr<SearchNode>>&)>;

struct SearchConfig {
  uint64_t inference_budget = 200000;
  uint64_t playouts_per_bigstep = 2000;
  double exploration_c = 2.0;
  double tau = 2.5;
  double heuristic_base = 0.95;
  double value_discount = 0.99;
  uint64_t playout_len = 0;  // 0 = run each playout until a new node
  bool reuse_tree = true;
  bool puct = false;
  uint64_t seed = 0;
  SearchMode mode = SearchMode::Uct;
  ChildSelector selector_override;  // test hook, bypasses UCT selection
};

struct SearchNode {
  Action action;
  double prior = 1.0;
  double reward_sum = 0.0;  // w_i
  uint64_t visits = 0;      // n_i
  enum class Status : uint8_t { Open, Proved, DeadEnd } status = Status::Open;
  double leaf_value = 0.0;  // evaluation at first expansion, reused at terminals
  bool expanded = false;
  std::vector<std::unique_ptr<SearchNode>> children;

  double mean_reward() const {
    return visits ? reward_sum / static_cast<double>(visits) : 0.0;
  }
};

enum class ProofStatus { Proved, BudgetExhausted, DeadRoot };

std::string to_string(ProofStatus s);

struct ProofResult {
  ProofStatus status = ProofStatus::BudgetExhausted;
  std::vector<Action> actions;  // proof sequence when proved
  uint64_t inferences = 0;
  uint64_t playouts = 0;
  uint64_t bigsteps = 0;
  uint32_t proof_depth_limit = 0;  // iterative deepening only
};

// Everything captured at a bigstep decision, for training-data extraction.
struct BigstepRecord {
  FeatureVector policy_state;
  FeatureVector value_state;
  std::vector<std::pair<FeatureVector, uint64_t>> visited_children;
  uint64_t trail_length = 0;  // committed actions before this bigstep
};

// Leaf heuristic: heuristic_base ^ (open goal count); closed state -> 1.
double heuristic_value(const TableauState& state, double base = 0.95);

// UCT child score for a visited child; unvisited children are selected first
// (ties by descending prior, then ascending action encoding).
double uct_score(double reward_sum, uint64_t visits, double prior,
                 uint64_t parent_visits, double c, bool puct = false);

// MCTS search tree rooted at the current bigstep tableau. One mutable
// TableauState, applied on descent and rewound on return.
class SearchTree {
 public:
  SearchTree(const Problem& problem, const SearchConfig& config,
             const Model* policy = nullptr, const Model* value = nullptr);

  // One playout: descend, expand/evaluate, backpropagate. Returns false when
  // the search is finished (proved or budget exhausted).
  bool playout();

  // Commits the most-visited root child and re-roots the tree. Returns the
  // chosen action, or nullopt when no child was ever visited (dead root).
  std::optional<Action> bigstep();

  bool finished() const { return finished_; }
  ProofStatus status() const { return status_; }
  const SearchNode& root() const { return *root_; }
  const TableauState& state() const { return state_; }
  uint64_t inferences_used() const { return inferences_used_; }
  uint64_t playouts_run() const { return playouts_; }
  uint64_t bigsteps_taken() const { return bigsteps_; }
  const std::vector<Action>& proof_actions() const { return proof_actions_; }
  const std::vector<BigstepRecord>& bigstep_records() const { return records_; }

  ProofResult result() const;

 private:
  void expand(SearchNode& node);
  int select_child(SearchNode& node);
  bool apply_budgeted(const Action& action);

  const Problem& problem_;
  SearchConfig config_;
  const Model* policy_model_;
  const Model* value_model_;
  SplitMix64 rng_;

  TableauState state_;
  std::unique_ptr<SearchNode> root_;
  std::vector<Action> trail_;
  std::vector<BigstepRecord> records_;
  std::vector<Action> proof_actions_;

  uint64_t inferences_used_ = 0;
  uint64_t playouts_ = 0;
  uint64_t bigsteps_ = 0;
  bool finished_ = false;
  ProofStatus status_ = ProofStatus::BudgetExhausted;
};

// Full playout/bigstep loop as configured.
ProofResult prove(const Problem& problem, const SearchConfig& config,
                  const Model* policy = nullptr, const Model* value = nullptr,
                  std::vector<BigstepRecord>* records_out = nullptr);

// Complete backtracking connection search with iterative deepening on
// tableau depth, same inference accounting and budget.
ProofResult prove_iterative_deepening(const Problem& problem,
                                      const SearchConfig& config);

// Policy and value examples from the bigstep records of one finished search.
std::pair<std::vector<TrainingExample>, std::vector<TrainingExample>>
collect_examples(const std::vector<BigstepRecord>& records,
                 const ProofResult& result, const SearchConfig& config,
                 const ExampleOrigin& origin_base = {});

}  // namespace ctp
