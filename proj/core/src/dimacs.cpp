#include "ppszkit/dimacs.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ppszkit/error.hpp"

namespace ppszkit {

namespace {

class Scanner {
 public:
  explicit Scanner(std::istream& in) : in_(in) {}

  int line() const { return line_; }

  /// Skips whitespace and comment lines; returns false at end of input.
  bool skip() {
    for (;;) {
      int c = in_.peek();
      if (c == EOF) return false;
      if (c == '\n') {
        ++line_;
        in_.get();
        continue;
      }
      if (std::isspace(c)) {
        in_.get();
        continue;
      }
      if (c == 'c') {
        std::string dump;
        std::getline(in_, dump);
        ++line_;
        continue;
      }
      return true;
    }
  }

  bool nextToken(std::string& tok) {
    if (!skip()) return false;
    tok.clear();
    int c;
    while ((c = in_.peek()) != EOF && !std::isspace(c)) {
      tok.push_back(static_cast<char>(in_.get()));
    }
    return true;
  }

 private:
  std::istream& in_;
  int line_ = 1;
};

long long parseInt(const std::string& tok, int line, const char* what) {
  if (tok.empty()) throw ParseError(line, std::string("expected ") + what);
  std::size_t i = tok[0] == '-' ? 1 : 0;
  if (i == tok.size()) throw ParseError(line, std::string("expected ") + what);
  long long value = 0;
  for (; i < tok.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(tok[i])))
      throw ParseError(line, "malformed integer '" + tok + "'");
    value = value * 10 + (tok[i] - '0');
    if (value > 100000000LL)
      throw ParseError(line, "integer out of range '" + tok + "'");
  }
  return tok[0] == '-' ? -value : value;
}

}  // namespace

CnfFormula parse_dimacs(std::istream& in) {
  Scanner sc(in);
  std::string tok;

  if (!sc.nextToken(tok)) throw ParseError(sc.line(), "missing header");
  if (tok != "p") throw ParseError(sc.line(), "expected 'p cnf' header");
  if (!sc.nextToken(tok) || tok != "cnf")
    throw ParseError(sc.line(), "expected 'p cnf' header");
  if (!sc.nextToken(tok)) throw ParseError(sc.line(), "header missing counts");
  long long n = parseInt(tok, sc.line(), "variable count");
  if (!sc.nextToken(tok)) throw ParseError(sc.line(), "header missing counts");
  long long m = parseInt(tok, sc.line(), "clause count");
  if (n < 0 || m < 0) throw ParseError(sc.line(), "negative header counts");

  std::vector<Var> vars;
  vars.reserve(static_cast<std::size_t>(n));
  for (Var v = 1; v <= n; ++v) vars.push_back(v);

  std::vector<Clause> clauses;
  std::vector<Lit> current;
  long long read = 0;
  while (sc.nextToken(tok)) {
    const int line = sc.line();
    long long lit = parseInt(tok, line, "literal");
    if (lit == 0) {
      for (std::size_t i = 0; i < current.size(); ++i)
        for (std::size_t j = i + 1; j < current.size(); ++j)
          if (current[i].var() == current[j].var() &&
              current[i].positive() != current[j].positive())
            throw ParseError(line, "tautological clause");
      clauses.emplace_back(current);
      current.clear();
      ++read;
      continue;
    }
    long long v = lit < 0 ? -lit : lit;
    if (v > n)
      throw ParseError(line, "literal " + tok + " out of range (n=" +
                                 std::to_string(n) + ")");
    current.push_back(Lit::fromDimacs(static_cast<int>(lit)));
  }
  if (!current.empty())
    throw ParseError(sc.line(), "unterminated clause at end of input");
  if (read != m)
    throw ParseError(sc.line(), "clause count mismatch: header says " +
                                    std::to_string(m) + ", found " +
                                    std::to_string(read));
  return CnfFormula(std::move(vars), std::move(clauses));
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

void emit_dimacs(const CnfFormula& f, std::ostream& out) {
  // DIMACS cannot express gaps in the variable set, so the header count is
  // the largest id. Round-trip is exact whenever vars() is {1..n}.
  const int n = f.vars().empty() ? 0 : f.vars().back();
  out << "p cnf " << n << ' ' << f.clauseCount() << '\n';
  for (const Clause& c : f.clauses()) {
    for (Lit l : c.literals()) out << l.dimacs() << ' ';
    out << "0\n";
  }
}

std::string emit_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  emit_dimacs(f, out);
  return out.str();
}

}  // namespace ppszkit
