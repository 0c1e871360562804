#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ppszkit/cnf.hpp"
#include "ppszkit/implication.hpp"
#include "ppszkit/oracle.hpp"
#include "ppszkit/rational.hpp"
#include "ppszkit/rng.hpp"

namespace ppszkit {

/// Default cap for permutation-enumeration oracles (n! runs).
inline constexpr int kDefaultPermCap = 8;

/// Samples the literal-selection process: repeatedly draw a uniform
/// satisfying literal of the current restriction and apply it, until no
/// variable remains. The output always satisfies f.
/// Requires f satisfiable and n(f) <= enum_cap.
Assignment assign_satisfiable_literals(const CnfFormula& f, Rng& rng,
                                       int enum_cap = kDefaultEnumCap);

/// Exact probability that the process above outputs alpha restricted to
/// V(f). alpha must be total on a superset of V(f); extra bindings are
/// ignored. Zero for assignments that do not satisfy f.
Rational p_exact(const CnfFormula& f, const Assignment& alpha,
                 int enum_cap = kDefaultEnumCap);

/// Exact fraction of the n! permutations for which x is guessed when PPSZ
/// runs with beta = alpha. Requires alpha satisfying; x outside V(f) gives 0.
Rational pguessed_exact_perm(const CnfFormula& f, Var x,
                             const Assignment& alpha, int s,
                             int perm_cap = kDefaultPermCap);

/// All per-variable guessed probabilities from one permutation sweep.
std::vector<std::pair<Var, Rational>> pguessed_exact_perm_all(
    const CnfFormula& f, const Assignment& alpha, int s,
    int perm_cap = kDefaultPermCap);

/// Same value through the restriction recurrence
///   pguessed(F,x) = 1/n * (1 + sum_{l in alpha} pguessed(F^[l],x))
/// with bases: x not in V -> 0, x eliminated by the implication fixpoint
/// of a restriction -> 0. Requires f s-implication free (apply fix_implied
/// first); throws ContractViolation otherwise.
Rational pguessed_exact_rec(const CnfFormula& f, Var x,
                            const Assignment& alpha, int s,
                            int enum_cap = kDefaultEnumCap);

/// General exact guessed probability: fixes s-implied literals first, then
/// evaluates the recurrence on the residual (0 for variables eliminated by
/// the root fixpoint). Agrees with the permutation oracle everywhere.
Rational pguessed_exact(const CnfFormula& f, Var x, const Assignment& alpha,
                        int s, int enum_cap = kDefaultEnumCap);

/// pguessed_exact for every variable of V(f) in one shared computation.
std::vector<std::pair<Var, Rational>> pguessed_exact_all(
    const CnfFormula& f, const Assignment& alpha, int s,
    int enum_cap = kDefaultEnumCap);

/// Cost of a variable. s_bound must be a certified rational upper bound on
/// S_k for k = max(3, width(f)); non-frozen variables cost s_bound, frozen
/// ones the p-weighted average guessed probability, absent ones 0.
struct CostValue {
  Rational value;
  Rational s_bound;
};
CostValue cost(const CnfFormula& f, Var x, int s, const Rational& s_bound,
               int enum_cap = kDefaultEnumCap);
CostValue cost_total(const CnfFormula& f, int s, const Rational& s_bound,
                     int enum_cap = kDefaultEnumCap);

/// Per-variable costs plus the total, computed in one pass.
struct CostBreakdown {
  std::vector<std::pair<Var, Rational>> per_var;
  Rational total;
  Rational s_bound;
};
CostBreakdown cost_breakdown(const CnfFormula& f, int s,
                             const Rational& s_bound,
                             int enum_cap = kDefaultEnumCap);

/// Exact PPSZ success probability via the restriction recurrence
///   psuccess(F) = 1/(2n) * sum_{l in SL(F)} psuccess(F^[l])
/// applied after fixing implied literals. Returns 0 for unsatisfiable f.
Rational psuccess_exact(const CnfFormula& f, int s,
                        int enum_cap = kDefaultEnumCap);

/// Brute-force reference: enumerates all (beta, pi) pairs. Test oracle;
/// n(f) <= cap enforced.
Rational psuccess_enumerated(const CnfFormula& f, int s, int cap = 6);

/// Monte Carlo estimate of the success probability with a Wilson 95%
/// confidence interval.
struct McEstimate {
  double estimate;
  double ci_low;
  double ci_high;
  std::uint64_t trials;
};
McEstimate psuccess_mc(const CnfFormula& f, int s, std::uint64_t trials,
                       Rng& rng);

}  // namespace ppszkit
