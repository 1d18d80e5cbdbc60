#pragma once

#include <stdexcept>
#include <string>

#include "ctp/syntax.hpp"

namespace ctp {

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) +
                           ", column " + std::to_string(col_)),
        line(line_),
        column(col_) {}
};

// Parses a TPTP-style clausal problem:
//   cnf(name, role, (L1 | ... | Ln)).
// Role negated_conjecture marks start clauses; '%' starts a line comment;
// include('file'). is resolved relative to include_dir.
Problem parse_problem(const std::string& text, const std::string& include_dir = ".");

Problem parse_problem_file(const std::string& path, const std::string& include_dir = "");

}  // namespace ctp
