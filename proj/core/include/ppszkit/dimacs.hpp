#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "ppszkit/cnf.hpp"

namespace ppszkit {

/// Parses DIMACS CNF: 'c' comment lines, a "p cnf <n> <m>" header,
/// whitespace-separated signed literals with each clause terminated by 0.
/// Variables are 1..n from the header, including unmentioned ones. Duplicate
/// literals within a clause are collapsed; duplicate clauses are deduplicated.
/// Throws ParseError (with a line number) on malformed input, out-of-range
/// literals, and tautological clauses.
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(std::string_view text);

/// Emits canonical DIMACS. parse_dimacs(emit_dimacs(f)) == f whenever
/// vars(f) is {1..n}; formulas with gaps (e.g. restrictions) re-parse to the
/// contiguous superset since DIMACS cannot express missing ids.
void emit_dimacs(const CnfFormula& f, std::ostream& out);
std::string emit_dimacs(const CnfFormula& f);

}  // namespace ppszkit
