#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ppszkit/lit.hpp"

namespace ppszkit {

/// A clause: a finite set of literals over pairwise distinct variables.
/// Literals are kept sorted by variable; the empty clause is representable
/// and signals unsatisfiability of the enclosing restriction.
class Clause {
 public:
  Clause() = default;
  /// Canonicalizes (sorts, collapses duplicate literals). Throws
  /// ContractViolation if the clause contains a variable in both polarities.
  explicit Clause(std::vector<Lit> lits);

  int width() const { return static_cast<int>(lits_.size()); }
  bool empty() const { return lits_.empty(); }
  bool contains(Lit l) const;
  bool mentions(Var v) const;
  const std::vector<Lit>& literals() const { return lits_; }

  bool satisfiedBy(const Assignment& a) const;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.lits_ == b.lits_;
  }
  friend bool operator<(const Clause& a, const Clause& b);

 private:
  std::vector<Lit> lits_;
};

/// An immutable CNF formula: a clause set F over an explicit variable set V.
/// V may contain variables occurring in no clause. Clauses are stored in a
/// canonical order and deduplicated, so equal formulas compare equal and the
/// type can serve as a memoization key.
class CnfFormula {
 public:
  CnfFormula() = default;
  /// Throws ContractViolation if some literal's variable is not in vars.
  CnfFormula(std::vector<Var> vars, std::vector<Clause> clauses);

  /// Number of variables, n(F).
  int n() const { return static_cast<int>(vars_.size()); }
  std::size_t clauseCount() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::vector<Var>& vars() const { return vars_; }
  bool hasVar(Var v) const;
  bool hasEmptyClause() const;
  /// Maximum clause width (0 for an empty clause set).
  int maxWidth() const { return width_; }

  /// F^[l]: clauses containing l removed, the complement of l deleted from
  /// the remaining clauses, var(l) removed from V. Requires var(l) in V.
  CnfFormula restricted(Lit l) const;

  /// True iff every clause contains a satisfied literal. Requires a to be
  /// total on vars(); extra bindings are ignored.
  bool satisfiedBy(const Assignment& a) const;

  std::size_t hashValue() const;

  friend bool operator==(const CnfFormula& a, const CnfFormula& b) {
    return a.vars_ == b.vars_ && a.clauses_ == b.clauses_;
  }

 private:
  std::vector<Clause> clauses_;
  std::vector<Var> vars_;
  int width_ = 0;
};

struct CnfFormulaHash {
  std::size_t operator()(const CnfFormula& f) const { return f.hashValue(); }
};

/// Spec-style free functions.
inline CnfFormula restrict_formula(const CnfFormula& f, Lit l) {
  return f.restricted(l);
}
inline bool is_satisfied_by(const CnfFormula& f, const Assignment& a) {
  return f.satisfiedBy(a);
}

}  // namespace ppszkit
