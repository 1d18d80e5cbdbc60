#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctp/symbols.hpp"

namespace ctp {

// A term is either a variable (sym == 0) or an application. Variable ids are
// local to a clause in the input matrix; clause copies shift them to global
// ids at runtime.
struct Term {
  uint64_t sym = 0;
  uint64_t var = 0;
  std::vector<Term> args;

  bool is_var() const { return sym == 0; }

  static Term make_var(uint64_t v) {
    Term t;
    t.var = v;
    return t;
  }
  static Term make_app(uint64_t s, std::vector<Term> a = {}) {
    Term t;
    t.sym = s;
    t.args = std::move(a);
    return t;
  }

  bool operator==(const Term& o) const {
    return sym == o.sym && var == o.var && args == o.args;
  }
};

struct Literal {
  bool positive = true;
  uint64_t predicate = 0;
  std::vector<Term> args;

  bool operator==(const Literal& o) const {
    return positive == o.positive && predicate == o.predicate && args == o.args;
  }
};

struct Clause {
  int index = -1;
  std::string name;
  std::vector<Literal> literals;
  bool from_conjecture = false;
  uint32_t var_count = 0;  // number of distinct local variables
};

struct Problem {
  std::vector<Clause> clauses;
  SymbolTable symbols;
  std::vector<int> start_clause_indices;

  bool empty() const { return clauses.empty(); }
};

// Printing (TPTP-ish, round-trips through the parser).
std::string to_string(const Term& t, const SymbolTable& symbols);
std::string to_string(const Literal& l, const SymbolTable& symbols);
std::string to_string(const Clause& c, const SymbolTable& symbols);
std::string to_string(const Problem& p);

// Structural size / depth of a literal tree, predicate node included
// (a propositional atom has size 1, depth 1).
uint32_t literal_size(const Literal& l);
uint32_t literal_depth(const Literal& l);

}  // namespace ctp
