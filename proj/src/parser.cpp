#include "ctp/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace ctp {
namespace {

struct Tokenizer {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Tokenizer(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '%') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError(std::string("expected '") + c + "'", line, col);
    advance();
  }

  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      advance();
      return true;
    }
    return false;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !ident_char(text[pos]))
      throw ParseError("expected identifier", line, col);
    std::string out;
    while (pos < text.size() && ident_char(text[pos])) {
      out.push_back(text[pos]);
      advance();
    }
    return out;
  }

  std::string quoted() {
    skip_ws();
    expect('\'');
    std::string out;
    while (pos < text.size() && text[pos] != '\'') {
      out.push_back(text[pos]);
      advance();
    }
    expect('\'');
    return out;
  }
};

class ProblemParser {
 public:
  explicit ProblemParser(std::string include_dir)
      : include_dir_(std::move(include_dir)) {}

  void parse_text(const std::string& text) {
    Tokenizer tok(text);
    while (!tok.eof()) {
      std::string kw = tok.ident();
      if (kw == "cnf") {
        parse_cnf(tok);
      } else if (kw == "include") {
        tok.expect('(');
        std::string file = tok.quoted();
        tok.expect(')');
        tok.expect('.');
        std::ifstream in(include_dir_ + "/" + file);
        if (!in)
          throw ParseError("cannot open include file '" + file + "'", tok.line,
                           tok.col);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string included = ss.str();
        parse_text(included);
      } else {
        throw ParseError("unknown declaration '" + kw + "'", tok.line, tok.col);
      }
    }
  }

  Problem finish() {
    problem_.start_clause_indices.clear();
    for (const Clause& c : problem_.clauses)
      if (c.from_conjecture) problem_.start_clause_indices.push_back(c.index);
    if (problem_.start_clause_indices.empty())
      for (const Clause& c : problem_.clauses)
        problem_.start_clause_indices.push_back(c.index);
    return std::move(problem_);
  }

 private:
  void parse_cnf(Tokenizer& tok) {
    tok.expect('(');
    Clause clause;
    clause.name = tok.ident();
    tok.expect(',');
    std::string role = tok.ident();
    clause.from_conjecture = (role == "negated_conjecture");
    tok.expect(',');
    bool outer_paren = tok.accept('(');
    std::map<std::string, uint64_t> vars;
    clause.literals.push_back(parse_literal(tok, vars));
    while (tok.accept('|')) clause.literals.push_back(parse_literal(tok, vars));
    if (outer_paren) tok.expect(')');
    tok.expect(')');
    tok.expect('.');
    clause.var_count = static_cast<uint32_t>(vars.size());
    clause.index = static_cast<int>(problem_.clauses.size());
    problem_.clauses.push_back(std::move(clause));
  }

  Literal parse_literal(Tokenizer& tok, std::map<std::string, uint64_t>& vars) {
    Literal lit;
    lit.positive = !tok.accept('~');
    int line = tok.line, col = tok.col;
    std::string name = tok.ident();
    if (std::isupper(static_cast<unsigned char>(name[0])))
      throw ParseError("predicate '" + name + "' may not start uppercase", line,
                       col);
    std::vector<Term> args;
    if (tok.accept('(')) {
      args.push_back(parse_term(tok, vars));
      while (tok.accept(',')) args.push_back(parse_term(tok, vars));
      tok.expect(')');
    }
    uint32_t arity = static_cast<uint32_t>(args.size());
    check_arity(name, arity, SymbolKind::Predicate, line, col);
    lit.predicate = problem_.symbols.intern(name, arity, SymbolKind::Predicate);
    lit.args = std::move(args);
    return lit;
  }

  Term parse_term(Tokenizer& tok, std::map<std::string, uint64_t>& vars) {
    int line = tok.line, col = tok.col;
    std::string name = tok.ident();
    if (std::isupper(static_cast<unsigned char>(name[0]))) {
      auto it = vars.find(name);
      if (it == vars.end())
        it = vars.emplace(name, static_cast<uint64_t>(vars.size())).first;
      return Term::make_var(it->second);
    }
    std::vector<Term> args;
    if (tok.accept('(')) {
      args.push_back(parse_term(tok, vars));
      while (tok.accept(',')) args.push_back(parse_term(tok, vars));
      tok.expect(')');
    }
    uint32_t arity = static_cast<uint32_t>(args.size());
    check_arity(name, arity, SymbolKind::Function, line, col);
    uint64_t sym = problem_.symbols.intern(name, arity, SymbolKind::Function);
    return Term::make_app(sym, std::move(args));
  }

  void check_arity(const std::string& name, uint32_t arity, SymbolKind kind,
                   int line, int col) {
    auto key = std::make_pair(name, kind);
    auto it = arities_.find(key);
    if (it == arities_.end()) {
      arities_.emplace(key, arity);
    } else if (it->second != arity) {
      throw ParseError("arity clash for '" + name + "': " +
                           std::to_string(it->second) + " vs " +
                           std::to_string(arity),
                       line, col);
    }
  }

  std::string include_dir_;
  Problem problem_;
  std::map<std::pair<std::string, SymbolKind>, uint32_t> arities_;
};

}  // namespace

Problem parse_problem(const std::string& text, const std::string& include_dir) {
  ProblemParser p(include_dir);
  p.parse_text(text);
  return p.finish();
}

Problem parse_problem_file(const std::string& path, const std::string& include_dir) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string dir = include_dir;
  if (dir.empty()) {
    auto slash = path.find_last_of('/');
    dir = slash == std::string::npos ? "." : path.substr(0, slash);
  }
  return parse_problem(ss.str(), dir);
}

}  // namespace ctp
