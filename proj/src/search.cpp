#include "ctp/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctp {

std::string to_string(SearchMode m) {
  switch (m) {
    case SearchMode::Bare: return "bare";
    case SearchMode::Uct: return "uct";
    case SearchMode::UctPolicy: return "uct+policy";
    case SearchMode::UctValue: return "uct+value";
    case SearchMode::UctPolicyValue: return "uct+policy+value";
  }
  return "?";
}

SearchMode search_mode_from_string(const std::string& s) {
  if (s == "bare") return SearchMode::Bare;
  if (s == "uct") return SearchMode::Uct;
  if (s == "uct+policy") return SearchMode::UctPolicy;
  if (s == "uct+value") return SearchMode::UctValue;
  if (s == "uct+policy+value") return SearchMode::UctPolicyValue;
  throw std::invalid_argument("unknown search mode: " + s);
}

std::string to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::Proved: return "proved";
    case ProofStatus::BudgetExhausted: return "budget_exhausted";
    case ProofStatus::DeadRoot: return "dead_root";
  }
  return "?";
}

double heuristic_value(const TableauState& state, double base) {
  return std::pow(base, static_cast<double>(state.open_goal_count()));
}

double uct_score(double reward_sum, uint64_t visits, double prior,
                 uint64_t parent_visits, double c, bool puct) {
  double n = static_cast<double>(visits);
  double mean = reward_sum / n;
  double np = static_cast<double>(parent_visits < 1 ? 1 : parent_visits);
  if (puct) return mean + c * prior * std::sqrt(np) / (1.0 + n);
  return mean + c * prior * std::sqrt(std::log(np) / n);
}

SearchTree::SearchTree(const Problem& problem, const SearchConfig& config,
                       const Model* policy, const Model* value)
    : problem_(problem),
      config_(config),
      policy_model_(policy),
      value_model_(value),
      rng_(config.seed) {
  root_ = std::make_unique<SearchNode>();
}

void SearchTree::expand(SearchNode& node) {
  node.expanded = true;
  bool at_initial = state_.applied_actions().empty();
  if (!at_initial && state_.closed()) {
    node.status = SearchNode::Status::Proved;
    node.leaf_value = 1.0;
    proof_actions_ = state_.applied_actions();
    finished_ = true;
    status_ = ProofStatus::Proved;
    return;
  }
  std::vector<Action> actions =
      at_initial ? start_actions(problem_) : applicable_actions(state_, problem_);
  if (actions.empty()) {
    node.status = SearchNode::Status::DeadEnd;
    node.leaf_value = 0.0;
    return;
  }
  const Model* policy = (config_.mode == SearchMode::UctPolicy ||
                         config_.mode == SearchMode::UctPolicyValue)
                            ? policy_model_
                            : nullptr;
  std::vector<double> priors;
  if (policy && !at_initial)
    priors = policy_priors(policy, state_, actions, problem_, config_.tau);
  else
    priors.assign(actions.size(), 1.0);
  node.children.reserve(actions.size());
  for (size_t i = 0; i < actions.size(); ++i) {
    auto child = std::make_unique<SearchNode>();
    child->action = actions[i];
    child->prior = priors[i];
    node.children.push_back(std::move(child));
  }
  const Model* value = (config_.mode == SearchMode::UctValue ||
                        config_.mode == SearchMode::UctPolicyValue)
                           ? value_model_
                           : nullptr;
  node.leaf_value = value ? value_estimate(*value, state_)
                          : heuristic_value(state_, config_.heuristic_base);
}

int SearchTree::select_child(SearchNode& node) {
  if (config_.selector_override) return config_.selector_override(node.children);
  if (config_.mode == SearchMode::Bare)
    return static_cast<int>(rng_.below(node.children.size()));

  int best = -1;
  bool best_unvisited = false;
  double best_score = 0.0;
  for (size_t i = 0; i < node.children.size(); ++i) {
    const SearchNode& c = *node.children[i];
    if (c.visits == 0) {
      if (!best_unvisited || c.prior > node.children[best]->prior ||
          (c.prior == node.children[best]->prior &&
           c.action.encoding < node.children[best]->action.encoding)) {
        best = static_cast<int>(i);
        best_unvisited = true;
      }
    } else if (!best_unvisited) {
      double s = uct_score(c.reward_sum, c.visits, c.prior, node.visits,
                           config_.exploration_c, config_.puct);
      if (best < 0 || s > best_score) {
        best = static_cast<int>(i);
        best_score = s;
      }
    }
  }
  return best;
}

bool SearchTree::apply_budgeted(const Action& action) {
  if (inferences_used_ >= config_.inference_budget) {
    finished_ = true;
    status_ = ProofStatus::BudgetExhausted;
    return false;
  }
  state_.apply(action, problem_);
  ++inferences_used_;
  return true;
}

bool SearchTree::playout() {
  if (finished_) return false;
  ++playouts_;

  TableauState::Mark root_mark = state_.mark();
  std::vector<SearchNode*> descent{root_.get()};
  SearchNode* node = root_.get();
  uint64_t depth = 0;
  double reward = 0.0;

  while (true) {
    if (node->status == SearchNode::Status::Proved) {
      reward = 1.0;
      break;
    }
    if (node->status == SearchNode::Status::DeadEnd) {
      reward = 0.0;
      break;
    }
    bool was_unexpanded = !node->expanded;
    if (was_unexpanded) {
      expand(*node);
      if (finished_) {  // proof found at this leaf
        for (SearchNode* n : descent) {
          ++n->visits;
          n->reward_sum += 1.0;
        }
        state_.undo_to(root_mark);
        return false;
      }
      if (node->status != SearchNode::Status::Open) {
        reward = node->leaf_value;
        break;
      }
      bool frontier_reached =
          config_.playout_len == 0 || depth >= config_.playout_len;
      if (frontier_reached) {
        reward = node->leaf_value;
        break;
      }
    }
    if (config_.playout_len != 0 && depth >= config_.playout_len) {
      reward = node->leaf_value;
      break;
    }
    int idx = select_child(*node);
    if (idx < 0) {  // all children exhausted somehow
      reward = node->leaf_value;
      break;
    }
    SearchNode* child = node->children[idx].get();
    if (!apply_budgeted(child->action)) {
      state_.undo_to(root_mark);
      return false;
    }
    descent.push_back(child);
    node = child;
    ++depth;
  }

  for (SearchNode* n : descent) {
    ++n->visits;
    n->reward_sum += reward;
  }
  state_.undo_to(root_mark);
  return !finished_;
}

std::optional<Action> SearchTree::bigstep() {
  if (finished_) return std::nullopt;

  int best = -1;
  for (size_t i = 0; i < root_->children.size(); ++i) {
    const SearchNode& c = *root_->children[i];
    if (c.visits == 0) continue;
    if (best < 0) {
      best = static_cast<int>(i);
      continue;
    }
    const SearchNode& b = *root_->children[best];
    if (c.visits > b.visits ||
        (c.visits == b.visits && c.mean_reward() > b.mean_reward()) ||
        (c.visits == b.visits && c.mean_reward() == b.mean_reward() &&
         c.action.encoding < b.action.encoding))
      best = static_cast<int>(i);
  }
  if (best < 0) {
    finished_ = true;
    status_ = ProofStatus::DeadRoot;
    return std::nullopt;
  }

  BigstepRecord rec;
  rec.trail_length = trail_.size();
  bool at_initial = state_.applied_actions().empty();
  if (!at_initial) rec.policy_state = state_features(state_, FeatureMode::Policy);
  rec.value_state = state_features(state_, FeatureMode::Value);
  for (const auto& child : root_->children) {
    if (child->visits == 0) continue;
    rec.visited_children.emplace_back(
        action_features(child->action, state_, problem_), child->visits);
  }
  records_.push_back(std::move(rec));

  Action chosen = root_->children[best]->action;
  if (!apply_budgeted(chosen)) return std::nullopt;
  trail_.push_back(chosen);
  ++bigsteps_;

  std::unique_ptr<SearchNode> new_root = std::move(root_->children[best]);
  if (!config_.reuse_tree) {
    auto fresh = std::make_unique<SearchNode>();
    fresh->action = new_root->action;
    new_root = std::move(fresh);
  }
  root_ = std::move(new_root);
  return chosen;
}

ProofResult SearchTree::result() const {
  ProofResult r;
  r.status = status_;
  r.actions = proof_actions_;
  r.inferences = inferences_used_;
  r.playouts = playouts_;
  r.bigsteps = bigsteps_;
  return r;
}

ProofResult prove(const Problem& problem, const SearchConfig& config,
                  const Model* policy, const Model* value,
                  std::vector<BigstepRecord>* records_out) {
  SearchTree tree(problem, config, policy, value);
  while (!tree.finished()) {
    for (uint64_t i = 0; i < config.playouts_per_bigstep && !tree.finished(); ++i)
      tree.playout();
    if (tree.finished()) break;
    tree.bigstep();
  }
  if (records_out) *records_out = tree.bigstep_records();
  return tree.result();
}

namespace {

struct DeepeningSearch {
  const Problem& problem;
  const SearchConfig& config;
  TableauState state;
  uint64_t inferences = 0;
  bool budget_out = false;
  bool cut = false;

  bool dfs(uint32_t depth_limit) {
    if (state.closed()) return true;
    uint32_t goal_depth = state.current_goal().depth();
    std::vector<Action> actions = applicable_actions(state, problem);
    for (const Action& a : actions) {
      if (a.kind() == ActionKind::Extension && goal_depth >= depth_limit) {
        cut = true;
        continue;
      }
      if (inferences >= config.inference_budget) {
        budget_out = true;
        return false;
      }
      auto m = state.mark();
      state.apply(a, problem);
      ++inferences;
      if (dfs(depth_limit)) return true;
      if (budget_out) return false;
      state.undo_to(m);
    }
    return false;
  }
};

}  // namespace

ProofResult prove_iterative_deepening(const Problem& problem,
                                      const SearchConfig& config) {
  DeepeningSearch search{problem, config};
  ProofResult result;

  for (uint32_t depth_limit = 1;; ++depth_limit) {
    search.cut = false;
    for (const Action& start : start_actions(problem)) {
      if (search.inferences >= config.inference_budget) {
        search.budget_out = true;
        break;
      }
      search.state.apply(start, problem);
      ++search.inferences;
      if (search.dfs(depth_limit)) {
        result.status = ProofStatus::Proved;
        result.actions = search.state.applied_actions();
        result.inferences = search.inferences;
        result.proof_depth_limit = depth_limit;
        return result;
      }
      search.state.undo_to(0);
      if (search.budget_out) break;
    }
    if (search.budget_out) {
      result.status = ProofStatus::BudgetExhausted;
      break;
    }
    if (!search.cut) {
      // search space exhausted below the bound with nothing cut off:
      // no proof exists
      result.status = ProofStatus::DeadRoot;
      break;
    }
  }
  result.inferences = search.inferences;
  return result;
}

std::pair<std::vector<TrainingExample>, std::vector<TrainingExample>>
collect_examples(const std::vector<BigstepRecord>& records,
                 const ProofResult& result, const SearchConfig& config,
                 const ExampleOrigin& origin_base) {
  std::vector<TrainingExample> policy, value;
  bool proved = result.status == ProofStatus::Proved;
  uint64_t proof_len = result.actions.size();

  for (size_t b = 0; b < records.size(); ++b) {
    const BigstepRecord& rec = records[b];
    ExampleOrigin origin = origin_base;
    origin.bigstep_index = static_cast<int>(b);

    if (!rec.visited_children.empty()) {
      double total = 0;
      for (const auto& [_, n] : rec.visited_children)
        total += static_cast<double>(n);
      double mean = total / static_cast<double>(rec.visited_children.size());
      for (const auto& [feats, n] : rec.visited_children) {
        TrainingExample ex;
        ex.features = rec.policy_state;
        ex.features.add_all(feats);
        ex.features = ex.features.finalized();
        ex.target = std::log(static_cast<double>(n) / mean);
        ex.origin = origin;
        policy.push_back(std::move(ex));
      }
    }

    double v = 0.0;
    if (proved && proof_len >= rec.trail_length)
      v = std::pow(config.value_discount,
                   static_cast<double>(proof_len - rec.trail_length));
    v = std::clamp(v, kValueClampLo, kValueClampHi);
    TrainingExample ex;
    ex.features = rec.value_state;
    ex.target = logit(v);
    ex.origin = origin;
    value.push_back(std::move(ex));
  }
  return {std::move(policy), std::move(value)};
}

}  // namespace ctp
