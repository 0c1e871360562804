#pragma once

#include <vector>

#include "ppszkit/cnf.hpp"

namespace ppszkit {

/// Default subformula size bound for implication, and the hard cap.
inline constexpr int kDefaultS = 3;
inline constexpr int kMaxS = 6;

/// Result of the s-implication fixpoint.
struct FixpointResult {
  CnfFormula residual;
  std::vector<Lit> fixed;  // in the order fixed
  bool contradiction = false;
};

/// True iff some subset G of F's clauses with |G| <= s forces l, i.e.
/// G together with the complement of l is unsatisfiable. The search is
/// seeded at clauses over var(l) and grown through shared variables, which
/// finds every core on formulas without a small unsatisfiable subformula
/// disjoint from var(l) (in particular on all satisfiable formulas). A
/// formula containing the empty clause implies every literal for s >= 1.
bool is_s_implied(const CnfFormula& f, Lit l, int s);

/// All s-implied literals over V(F); may contain both polarities of a
/// variable, which indicates an unsatisfiable formula.
std::vector<Lit> s_implied_literals(const CnfFormula& f, int s);

/// Restricts by s-implied literals until none remains (lowest variable id
/// first, positive polarity first). Reports contradiction = true when both
/// polarities of the selected variable are implied or the empty clause
/// appears; otherwise the residual is s-implication free.
FixpointResult fix_implied(const CnfFormula& f, int s);

}  // namespace ppszkit
