#pragma once

#include <optional>
#include <vector>

#include "ppszkit/cnf.hpp"

namespace ppszkit {

/// Default cap on exhaustive enumeration (2^cap assignments).
inline constexpr int kDefaultEnumCap = 20;

/// Partition of V(F) into frozen variables (same value in every satisfying
/// assignment) and non-frozen ones. Defined only for satisfiable F.
struct FrozenPartition {
  std::vector<Var> frozen;
  std::vector<Var> non_frozen;
};

/// Complete, deterministic DPLL decision oracle. Branches on the first
/// smallest clause in canonical order, trying its first literal true first;
/// unit propagation in between. Variables with no remaining clauses are
/// assigned false. Returns a total satisfying assignment, or nullopt.
std::optional<Assignment> dpll_solve(const CnfFormula& f);

/// All total assignments on V(F) that satisfy F, in increasing order of the
/// value mask over the sorted variable list. Throws CapExceeded if n > cap.
std::vector<Assignment> enumerate_sat(const CnfFormula& f,
                                      int cap = kDefaultEnumCap);

/// Frozen/non-frozen partition. Enumerates when n <= cap; otherwise decides
/// per variable with two DPLL calls. Throws ContractViolation if F is
/// unsatisfiable.
FrozenPartition frozen_partition(const CnfFormula& f,
                                 int cap = kDefaultEnumCap);

/// SL(F): literals l over V(F) with F^[l] satisfiable, sorted canonically.
/// Satisfies |SL| = 2*nN + nC. Throws ContractViolation if F unsatisfiable.
std::vector<Lit> satisfying_literals(const CnfFormula& f,
                                     int cap = kDefaultEnumCap);

}  // namespace ppszkit
