#include "ppszkit/cnf.hpp"

#include <algorithm>

#include "ppszkit/error.hpp"

namespace ppszkit {

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
  for (std::size_t i = 1; i < lits_.size(); ++i) {
    if (lits_[i].var() == lits_[i - 1].var())
      throw ContractViolation("tautological clause: variable " +
                              std::to_string(lits_[i].var()) +
                              " occurs in both polarities");
  }
}

bool Clause::contains(Lit l) const {
  auto it = std::lower_bound(lits_.begin(), lits_.end(), l);
  return it != lits_.end() && *it == l;
}

bool Clause::mentions(Var v) const {
  return contains(Lit(v, true)) || contains(Lit(v, false));
}

bool Clause::satisfiedBy(const Assignment& a) const {
  for (Lit l : lits_)
    if (a.satisfies(l)) return true;
  return false;
}

bool operator<(const Clause& a, const Clause& b) {
  return std::lexicographical_compare(a.lits_.begin(), a.lits_.end(),
                                      b.lits_.begin(), b.lits_.end());
}

CnfFormula::CnfFormula(std::vector<Var> vars, std::vector<Clause> clauses)
    : clauses_(std::move(clauses)), vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  if (!vars_.empty() && vars_.front() <= 0)
    throw ContractViolation("variable ids must be positive");
  std::sort(clauses_.begin(), clauses_.end());
  clauses_.erase(std::unique(clauses_.begin(), clauses_.end()),
                 clauses_.end());
  for (const Clause& c : clauses_) {
    width_ = std::max(width_, c.width());
    for (Lit l : c.literals()) {
      if (!hasVar(l.var()))
        throw ContractViolation("clause literal over unknown variable " +
                                std::to_string(l.var()));
    }
  }
}

bool CnfFormula::hasVar(Var v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

bool CnfFormula::hasEmptyClause() const {
  // Canonical order puts the empty clause first.
  return !clauses_.empty() && clauses_.front().empty();
}

CnfFormula CnfFormula::restricted(Lit l) const {
  if (!hasVar(l.var()))
    throw ContractViolation("restriction over variable " +
                            std::to_string(l.var()) + " not in V(F)");
  std::vector<Var> vars;
  vars.reserve(vars_.size() - 1);
  for (Var v : vars_)
    if (v != l.var()) vars.push_back(v);

  const Lit comp = l.complement();
  std::vector<Clause> clauses;
  clauses.reserve(clauses_.size());
  for (const Clause& c : clauses_) {
    if (c.contains(l)) continue;  // satisfied, drop
    if (c.contains(comp)) {
      std::vector<Lit> lits;
      lits.reserve(c.width() - 1);
      for (Lit u : c.literals())
        if (!(u == comp)) lits.push_back(u);
      clauses.emplace_back(std::move(lits));
    } else {
      clauses.push_back(c);
    }
  }
  return CnfFormula(std::move(vars), std::move(clauses));
}

bool CnfFormula::satisfiedBy(const Assignment& a) const {
  if (!a.totalOn(vars_))
    throw ContractViolation("assignment is not total on V(F)");
  for (const Clause& c : clauses_)
    if (!c.satisfiedBy(a)) return false;
  return true;
}

std::size_t CnfFormula::hashValue() const {
  // FNV-1a over the canonical literal stream.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (Var v : vars_) mix(static_cast<std::uint64_t>(v));
  mix(0xfeedu);
  for (const Clause& c : clauses_) {
    for (Lit l : c.literals())
      mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(l.dimacs())));
    mix(0xabcdu);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace ppszkit
