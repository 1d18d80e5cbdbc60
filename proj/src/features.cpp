#include "ctp/features.hpp"

#include <algorithm>
#include <unordered_map>

namespace ctp {

uint64_t context_salt(ContextTag tag) {
  switch (tag) {
    case ContextTag::Goal:          return 0xa076d05f4f3cd617ull;
    case ContextTag::Path:          return 0x13c6ef372fe94f82ull;
    case ContextTag::Tableau:       return 0x243f6a8885a308d3ull;
    case ContextTag::ActionClause:  return 0x452821e638d01377ull;
    case ContextTag::ActionLiteral: return 0xbe5466cf34e90c6cull;
  }
  return 0;
}

uint64_t feature_constants_hash() {
  uint64_t h = 14695981039346656037ull;
  auto mix = [&h](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(kFeatureSpace);
  mix(kFeatureDim);
  mix(kWalkPrime);
  mix(kVarMarker);
  mix(kNegationSalt);
  for (auto t : {ContextTag::Goal, ContextTag::Path, ContextTag::Tableau,
                 ContextTag::ActionClause, ContextTag::ActionLiteral})
    mix(context_salt(t));
  return h;
}

void FeatureVector::add(uint32_t index, double value) {
  entries_.emplace_back(index, value);
}

void FeatureVector::add_all(const FeatureVector& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

FeatureVector FeatureVector::finalized() const {
  std::vector<std::pair<uint32_t, double>> sorted = entries_;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  FeatureVector out;
  for (const auto& [idx, val] : sorted) {
    if (!out.entries_.empty() && out.entries_.back().first == idx)
      out.entries_.back().second += val;
    else
      out.entries_.emplace_back(idx, val);
  }
  out.entries_.erase(
      std::remove_if(out.entries_.begin(), out.entries_.end(),
                     [](const auto& e) { return e.second == 0.0; }),
      out.entries_.end());
  return out;
}

double FeatureVector::dot(const std::vector<double>& dense) const {
  double s = 0;
  for (const auto& [idx, val] : entries_) s += dense.at(idx) * val;
  return s;
}

namespace {

uint64_t node_id_term(const Term& t) {
  return t.is_var() ? kVarMarker : t.sym;
}

void emit_walk(uint64_t salt, const uint64_t* ids, int len,
               std::unordered_map<uint32_t, double>& counts) {
  uint64_t h = salt;
  for (int i = 0; i < len; ++i) h = h * kWalkPrime + ids[i];
  counts[static_cast<uint32_t>(h % kFeatureSpace)] += 1.0;
}

// Downward chains of length 1..3 anchored at the expression root.
void walk_node(uint64_t salt, uint64_t id0, const std::vector<Term>& children,
               std::unordered_map<uint32_t, double>& counts) {
  uint64_t ids[3] = {id0, 0, 0};
  emit_walk(salt, ids, 1, counts);
  for (const Term& c : children) {
    ids[1] = node_id_term(c);
    emit_walk(salt, ids, 2, counts);
    for (const Term& g : c.args) {
      ids[2] = node_id_term(g);
      emit_walk(salt, ids, 3, counts);
    }
  }
}

FeatureVector from_counts(const std::unordered_map<uint32_t, double>& counts) {
  FeatureVector v;
  for (const auto& [idx, val] : counts) v.add(idx, val);
  return v.finalized();
}

void walk_literal_into(const Literal& lit, ContextTag tag,
                       std::unordered_map<uint32_t, double>& counts) {
  uint64_t root = lit.positive ? lit.predicate : (lit.predicate ^ kNegationSalt);
  walk_node(context_salt(tag), root, lit.args, counts);
}

void count_symbols_term(const Term& t,
                        std::unordered_map<uint64_t, uint64_t>& freq) {
  if (!t.is_var()) {
    ++freq[t.sym];
    for (const Term& a : t.args) count_symbols_term(a, freq);
  }
}

}  // namespace

FeatureVector walk_features(const Literal& lit, ContextTag tag) {
  std::unordered_map<uint32_t, double> counts;
  walk_literal_into(lit, tag, counts);
  return from_counts(counts);
}

FeatureVector walk_features(const Term& term, ContextTag tag) {
  std::unordered_map<uint32_t, double> counts;
  walk_node(context_salt(tag), node_id_term(term), term.args, counts);
  return from_counts(counts);
}

FeatureVector state_features(const TableauState& state, FeatureMode mode) {
  const Substitution& subst = state.substitution();
  std::unordered_map<uint32_t, double> counts;

  std::vector<Literal> goals;
  goals.reserve(state.goals().size());
  for (const Goal& g : state.goals()) goals.push_back(subst.apply(g.literal));

  if (mode == FeatureMode::Policy) {
    if (!goals.empty()) walk_literal_into(goals.back(), ContextTag::Goal, counts);
  } else {
    for (const Literal& l : goals) walk_literal_into(l, ContextTag::Goal, counts);
  }
  std::vector<const Literal*> path;
  if (!state.goals().empty())
    path = path_literals(state.current_goal().path);
  for (const Literal* l : path)
    walk_literal_into(subst.apply(*l), ContextTag::Path, counts);
  for (const Literal& l : goals) walk_literal_into(l, ContextTag::Tableau, counts);

  FeatureVector v = from_counts(counts);

  // Abstract features at reserved dense slots.
  uint64_t total_size = 0, max_size = 0, max_depth = 0;
  std::unordered_map<uint64_t, uint64_t> freq;
  for (const Literal& l : goals) {
    uint64_t sz = literal_size(l);
    total_size += sz;
    max_size = std::max<uint64_t>(max_size, sz);
    max_depth = std::max<uint64_t>(max_depth, literal_depth(l));
    ++freq[l.predicate];
    for (const Term& a : l.args) count_symbols_term(a, freq);
  }
  std::vector<std::pair<uint64_t, uint64_t>> by_freq(freq.begin(), freq.end());
  std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  auto slot = [&v](uint32_t i, double val) {
    if (val != 0.0) v.add(kAbstractBase + i, val);
  };
  slot(0, static_cast<double>(goals.size()));
  slot(1, static_cast<double>(total_size));
  slot(2, static_cast<double>(max_size));
  slot(3, static_cast<double>(max_depth));
  slot(4, static_cast<double>(path.size()));
  slot(5, static_cast<double>(subst.size()));
  if (!by_freq.empty()) {
    slot(6, static_cast<double>(by_freq[0].first % 1009));
    slot(7, static_cast<double>(by_freq[0].second));
  }
  if (by_freq.size() > 1) {
    slot(8, static_cast<double>(by_freq[1].first % 1009));
    slot(9, static_cast<double>(by_freq[1].second));
  }
  return v.finalized();
}

FeatureVector action_features(const Action& action, const TableauState& state,
                              const Problem& problem) {
  std::unordered_map<uint32_t, double> counts;
  switch (action.kind()) {
    case ActionKind::Start:
    case ActionKind::Extension: {
      const Clause& c = problem.clauses.at(action.clause_index());
      for (const Literal& l : c.literals)
        walk_literal_into(l, ContextTag::ActionClause, counts);
      int li = action.kind() == ActionKind::Extension ? action.literal_index() : 0;
      walk_literal_into(c.literals.at(li), ContextTag::ActionLiteral, counts);
      break;
    }
    case ActionKind::Reduction: {
      auto lits = path_literals(state.current_goal().path);
      Literal inst =
          state.substitution().apply(*lits.at(action.path_position()));
      walk_literal_into(inst, ContextTag::ActionClause, counts);
      walk_literal_into(inst, ContextTag::ActionLiteral, counts);
      break;
    }
  }
  return from_counts(counts);
}

}  // namespace ctp
