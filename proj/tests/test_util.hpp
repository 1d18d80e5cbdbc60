#pragma once

#include <string>

#include "ctp/parser.hpp"

namespace ctp::testutil {

// The six-clause example problem with a closed tableau of depth 3.
inline const char* kSixClauseProblem = R"(
cnf(c1, axiom, (p(X))).
cnf(c2, axiom, (r(X,Y) | ~p(X) | q(Y))).
cnf(c3, axiom, (s(X) | ~q(b))).
cnf(c4, axiom, (~s(X) | ~q(X))).
cnf(c5, axiom, (~q(X) | ~r(a,X))).
cnf(c6, axiom, (~r(a,X) | q(X))).
)";

// {P(0), ~P(x) | P(s(x)), ~P(0)}: closable in two inferences, but with an
// infinite branch through the second clause.
inline const char* kSuccessorProblem = R"(
cnf(c1, axiom, (p(zero))).
cnf(c2, axiom, (~p(X) | p(s(X)))).
cnf(c3, axiom, (~p(zero))).
)";

inline Problem six_clause_problem() { return parse_problem(kSixClauseProblem); }
inline Problem successor_problem() { return parse_problem(kSuccessorProblem); }

}  // namespace ctp::testutil
