#include "ctp/syntax.hpp"

#include <algorithm>

namespace ctp {

std::string to_string(const Term& t, const SymbolTable& symbols) {
  if (t.is_var()) return "X" + std::to_string(t.var);
  std::string out = symbols.info(t.sym).name;
  if (!t.args.empty()) {
    out.push_back('(');
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) out.push_back(',');
      out += to_string(t.args[i], symbols);
    }
    out.push_back(')');
  }
  return out;
}

std::string to_string(const Literal& l, const SymbolTable& symbols) {
  std::string out = l.positive ? "" : "~";
  out += symbols.info(l.predicate).name;
  if (!l.args.empty()) {
    out.push_back('(');
    for (size_t i = 0; i < l.args.size(); ++i) {
      if (i) out.push_back(',');
      out += to_string(l.args[i], symbols);
    }
    out.push_back(')');
  }
  return out;
}

std::string to_string(const Clause& c, const SymbolTable& symbols) {
  std::string out = "cnf(" + c.name + ", ";
  out += c.from_conjecture ? "negated_conjecture" : "axiom";
  out += ", (";
  for (size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " | ";
    out += to_string(c.literals[i], symbols);
  }
  out += ")).";
  return out;
}

std::string to_string(const Problem& p) {
  std::string out;
  for (const Clause& c : p.clauses) {
    out += to_string(c, p.symbols);
    out.push_back('\n');
  }
  return out;
}

namespace {
uint32_t term_size(const Term& t) {
  uint32_t n = 1;
  for (const Term& a : t.args) n += term_size(a);
  return n;
}
uint32_t term_depth(const Term& t) {
  uint32_t d = 0;
  for (const Term& a : t.args) d = std::max(d, term_depth(a));
  return d + 1;
}
}  // namespace

uint32_t literal_size(const Literal& l) {
  uint32_t n = 1;
  for (const Term& a : l.args) n += term_size(a);
  return n;
}

uint32_t literal_depth(const Literal& l) {
  uint32_t d = 0;
  for (const Term& a : l.args) d = std::max(d, term_depth(a));
  return d + 1;
}

}  // namespace ctp
