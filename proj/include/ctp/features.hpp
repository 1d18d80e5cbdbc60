#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ctp/syntax.hpp"
#include "ctp/tableau.hpp"

namespace ctp {

// Hashed feature space: term-walk indices in [0, kFeatureSpace), abstract
// features at reserved dense slots above. All constants are normative and
// written into model files.
inline constexpr uint32_t kFeatureSpace = 262139;  // 2^18 - 5
inline constexpr uint32_t kAbstractBase = kFeatureSpace;
inline constexpr uint32_t kFeatureDim = kFeatureSpace + 16;
inline constexpr uint64_t kWalkPrime = 1000003;
inline constexpr uint64_t kVarMarker = 0x5bd1e995u;  // stands in for any variable
inline constexpr uint64_t kNegationSalt = 0x9ddfea08eb382d69ull;

enum class ContextTag : uint8_t { Goal, Path, Tableau, ActionClause, ActionLiteral };

// Per-context hash salts; contexts stay distinguishable inside one shared
// feature space.
uint64_t context_salt(ContextTag tag);

// Combined hash of all feature constants, stored in model metadata and
// checked on model load.
uint64_t feature_constants_hash();

// Sparse vector: (index, value) pairs sorted by index, duplicate-free,
// zero values dropped.
class FeatureVector {
 public:
  void add(uint32_t index, double value);
  void add_all(const FeatureVector& other);
  FeatureVector finalized() const;  // sorted, merged, zeros dropped

  const std::vector<std::pair<uint32_t, double>>& entries() const {
    return entries_;
  }
  double dot(const std::vector<double>& dense) const;
  bool operator==(const FeatureVector& o) const { return entries_ == o.entries_; }

 private:
  std::vector<std::pair<uint32_t, double>> entries_;
};

// Occurrence counts of all downward symbol walks of length 1..3 starting at
// any node of the expression tree. The root predicate carries polarity;
// variables map to one reserved marker id.
FeatureVector walk_features(const Literal& lit, ContextTag tag);
FeatureVector walk_features(const Term& term, ContextTag tag);

enum class FeatureMode { Policy, Value };

// Walk features of goal / path / tableau parts plus 10 abstract numeric
// features at kAbstractBase.., all literals taken under the current
// substitution.
FeatureVector state_features(const TableauState& state, FeatureMode mode);

// Walk features of the connecting clause and connecting literal under their
// two action tags. For reductions the path literal instance plays both roles.
FeatureVector action_features(const Action& action, const TableauState& state,
                              const Problem& problem);

}  // namespace ctp
