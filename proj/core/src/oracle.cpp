#include "ppszkit/oracle.hpp"

#include <algorithm>
#include <cstdint>

#include "ppszkit/error.hpp"

namespace ppszkit {

namespace {

// DPLL working state on literal-int clauses; small copies are fine at desk
// scale and keep backtracking trivial.
struct DpllState {
  std::vector<std::vector<int>> clauses;  // DIMACS codes, canonical order
  Assignment partial;

  // Applies l, reducing the clause set. Returns false on an empty clause.
  bool apply(int l) {
    partial.set(Lit::fromDimacs(l));
    std::vector<std::vector<int>> next;
    next.reserve(clauses.size());
    for (auto& c : clauses) {
      bool satisfied = false;
      for (int u : c)
        if (u == l) {
          satisfied = true;
          break;
        }
      if (satisfied) continue;
      std::vector<int> r;
      r.reserve(c.size());
      for (int u : c)
        if (u != -l) r.push_back(u);
      if (r.empty()) return false;
      next.push_back(std::move(r));
    }
    clauses = std::move(next);
    return true;
  }

  bool propagateUnits() {
    for (;;) {
      int unit = 0;
      for (auto& c : clauses)
        if (c.size() == 1) {
          unit = c[0];
          break;
        }
      if (unit == 0) return true;
      if (!apply(unit)) return false;
    }
  }
};

bool dpllRec(DpllState st, Assignment& model) {
  if (!st.propagateUnits()) return false;
  if (st.clauses.empty()) {
    model = st.partial;
    return true;
  }
  // Smallest clause, first in canonical order.
  std::size_t best = 0;
  for (std::size_t i = 1; i < st.clauses.size(); ++i)
    if (st.clauses[i].size() < st.clauses[best].size()) best = i;
  const int branch = st.clauses[best][0];
  {
    DpllState t = st;
    if (t.apply(branch) && dpllRec(std::move(t), model)) return true;
  }
  DpllState t = std::move(st);
  if (t.apply(-branch) && dpllRec(std::move(t), model)) return true;
  return false;
}

}  // namespace

std::optional<Assignment> dpll_solve(const CnfFormula& f) {
  if (f.hasEmptyClause()) return std::nullopt;
  DpllState st;
  st.clauses.reserve(f.clauseCount());
  for (const Clause& c : f.clauses()) {
    std::vector<int> ints;
    ints.reserve(c.width());
    for (Lit l : c.literals()) ints.push_back(l.dimacs());
    st.clauses.push_back(std::move(ints));
  }
  Assignment model;
  if (!dpllRec(std::move(st), model)) return std::nullopt;
  for (Var v : f.vars())
    if (!model.binds(v)) model.set(v, false);
  return model.restrictedTo(f.vars());
}

std::vector<Assignment> enumerate_sat(const CnfFormula& f, int cap) {
  const int n = f.n();
  if (n > cap)
    throw CapExceeded("enumerate_sat: n=" + std::to_string(n) +
                      " exceeds cap " + std::to_string(cap));
  const auto& vars = f.vars();

  // Clause masks over the sorted variable order.
  struct MaskClause {
    std::uint64_t pos = 0, neg = 0;
  };
  std::vector<MaskClause> mcs;
  mcs.reserve(f.clauseCount());
  for (const Clause& c : f.clauses()) {
    MaskClause mc;
    for (Lit l : c.literals()) {
      const auto idx = static_cast<std::uint64_t>(
          std::lower_bound(vars.begin(), vars.end(), l.var()) - vars.begin());
      (l.positive() ? mc.pos : mc.neg) |= (1ull << idx);
    }
    mcs.push_back(mc);
  }

  std::vector<Assignment> out;
  const std::uint64_t total = n == 0 ? 1 : (1ull << n);
  for (std::uint64_t value = 0; value < total; ++value) {
    bool ok = true;
    for (const MaskClause& mc : mcs) {
      if ((mc.pos & value) == 0 && (mc.neg & ~value) == 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Assignment a;
    for (int i = 0; i < n; ++i) a.set(vars[i], (value >> i) & 1ull);
    out.push_back(std::move(a));
  }
  return out;
}

FrozenPartition frozen_partition(const CnfFormula& f, int cap) {
  FrozenPartition part;
  if (f.n() <= cap) {
    auto models = enumerate_sat(f, cap);
    if (models.empty())
      throw ContractViolation("frozen_partition: formula is unsatisfiable");
    for (Var v : f.vars()) {
      const bool first = *models.front().value(v);
      bool frozen = true;
      for (const Assignment& a : models)
        if (*a.value(v) != first) {
          frozen = false;
          break;
        }
      (frozen ? part.frozen : part.non_frozen).push_back(v);
    }
    return part;
  }
  if (!dpll_solve(f))
    throw ContractViolation("frozen_partition: formula is unsatisfiable");
  for (Var v : f.vars()) {
    const bool sat1 = dpll_solve(f.restricted(Lit(v, true))).has_value();
    const bool sat0 = dpll_solve(f.restricted(Lit(v, false))).has_value();
    (sat1 && sat0 ? part.non_frozen : part.frozen).push_back(v);
  }
  return part;
}

std::vector<Lit> satisfying_literals(const CnfFormula& f, int cap) {
  std::vector<Lit> sl;
  if (f.n() <= cap) {
    auto models = enumerate_sat(f, cap);
    if (models.empty())
      throw ContractViolation("satisfying_literals: formula is unsatisfiable");
    for (Var v : f.vars()) {
      bool seen1 = false, seen0 = false;
      for (const Assignment& a : models) {
        (*a.value(v) ? seen1 : seen0) = true;
        if (seen1 && seen0) break;
      }
      if (seen1) sl.emplace_back(v, true);
      if (seen0) sl.emplace_back(v, false);
    }
    return sl;
  }
  if (!dpll_solve(f))
    throw ContractViolation("satisfying_literals: formula is unsatisfiable");
  for (Var v : f.vars()) {
    if (dpll_solve(f.restricted(Lit(v, true)))) sl.emplace_back(v, true);
    if (dpll_solve(f.restricted(Lit(v, false)))) sl.emplace_back(v, false);
  }
  return sl;
}

}  // namespace ppszkit
