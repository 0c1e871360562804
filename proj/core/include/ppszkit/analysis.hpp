#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppszkit/cnf.hpp"
#include "ppszkit/measure.hpp"
#include "ppszkit/rational.hpp"
#include "ppszkit/rng.hpp"

namespace ppszkit {

/// S_k = integral over [0,1] of (t^{1/(k-1)} - t) / (1 - t) dt, the guessed
/// probability bound governing the 2^{S_k n} running time. upper_rational
/// is a certified dyadic upper bound on a 2^-40 grid, suitable for exact
/// cost arithmetic.
struct SkValue {
  int k = 0;
  long double value = 0;
  Rational upper_rational;
  int digits = 0;
};

/// Adaptive Gauss-Kronrod quadrature on [0, 1 - 1e-8] with the removable
/// singularity at 1 handled through the integrand's continuous extension
/// (limit (k-2)/(k-1)). Accurate to `digits` decimal digits; digits in
/// [10, 13]. Throws ContractViolation for k < 3.
SkValue compute_sk(int k, int digits = 12);

/// compute_sk with a small per-process cache (digits = 12).
const SkValue& cached_sk(int k);

struct CheckRecord {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;  // slack in the passing direction
  bool pass = false;
};

/// Structured pass/fail record for the inequality checks on one instance.
/// Serializes as {"instance", "checks":[{name,lhs,rhs,margin,pass}], "pass"}.
struct VerificationReport {
  std::string instance;
  std::vector<CheckRecord> checks;
  bool pass = true;

  void add(std::string name, double lhs, double rhs, double margin, bool ok);
  std::string toJson() const;
};

/// Checks psuccess(F,s) >= 2^{-c(F)}. The right-hand side is bracketed by
/// dyadic rationals computed with directed rounding, so a pass is rigorous.
/// Requires F satisfiable and within the enumeration cap.
VerificationReport verify_cost_bound(const CnfFormula& f, int s,
                                     int enum_cap = kDefaultEnumCap,
                                     const std::string& instance_id = "");

/// Checks the expected cost decrease under a uniform satisfying literal,
///   E_l[c(F^[l])] <= c(F) - nN * 2S/|SL| - nC * 1/|SL|,
/// plus the per-variable bounds behind it (non-frozen: decrease 2S/|SL|;
/// frozen: decrease 1/|SL|), all in exact rational arithmetic.
/// Requires F satisfiable and s-implication free.
VerificationReport verify_cost_decrease(const CnfFormula& f, int s,
                                        int enum_cap = kDefaultEnumCap,
                                        const std::string& instance_id = "");

/// Exact checks over all satisfying alpha and literals l of alpha:
/// monotonicity of pguessed under restriction, the reduction identity on the
/// implication-free residual, p-monotonicity, p-equality for frozen
/// variables, and cost monotonicity under frozen restriction. The top-level
/// pguessed values are cross-checked against the permutation oracle.
VerificationReport verify_pguessed_lemmas(const CnfFormula& f, int s,
                                          int perm_cap = kDefaultPermCap,
                                          const std::string& instance_id = "");

/// Monte Carlo guessed-rate per variable w.r.t. a solver model; reported
/// against S_k for context only (the finite-s excess is not asserted).
struct GuessRateEntry {
  Var var = 0;
  bool frozen = false;
  double rate = 0;
  double ci_low = 0;
  double ci_high = 0;
};
struct GuessRateReport {
  int s = 0;
  std::uint64_t trials = 0;
  double sk = 0;
  std::vector<GuessRateEntry> entries;
};
GuessRateReport measure_guess_rate(const CnfFormula& f, int s,
                                   std::uint64_t trials, Rng& rng,
                                   int enum_cap = kDefaultEnumCap);

}  // namespace ppszkit
