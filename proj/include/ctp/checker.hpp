#pragma once

#include <string>
#include <vector>

#include "ctp/syntax.hpp"
#include "ctp/tableau.hpp"

namespace ctp {

// Independent replay of an action sequence. Shares no code with the search
// state machine: its own substitution representation and unification. Returns
// true iff every step's preconditions hold and the final tableau is closed.
// On failure, diagnostic describes the first violation.
bool check_proof(const Problem& problem, const std::vector<Action>& actions,
                 std::string* diagnostic = nullptr);

}  // namespace ctp
