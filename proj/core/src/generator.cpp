#include "ppszkit/generator.hpp"

#include <algorithm>
#include <set>

#include "ppszkit/error.hpp"

namespace ppszkit {

namespace {

void checkSpec(const GenSpec& spec) {
  if (spec.k < 2) throw ContractViolation("generator: k must be >= 2");
  if (spec.n < spec.k)
    throw ContractViolation("generator: need n >= k, got n=" +
                            std::to_string(spec.n) + " k=" +
                            std::to_string(spec.k));
  if (spec.m < 0) throw ContractViolation("generator: m must be >= 0");
  // Distinct-clause feasibility: C(n,k) * 2^k, computed with saturation.
  long double possible = 1.0L;
  for (int i = 0; i < spec.k; ++i)
    possible *= static_cast<long double>(spec.n - i) / (i + 1);
  for (int i = 0; i < spec.k; ++i) possible *= 2.0L;
  if (static_cast<long double>(spec.m) > possible)
    throw ContractViolation("generator: m exceeds the number of distinct "
                            "width-k clauses");
}

Clause drawClause(const GenSpec& spec, Rng& rng, std::vector<Var>& pool) {
  // Partial Fisher-Yates for k distinct variables.
  for (int i = 0; i < spec.k; ++i) {
    const auto j = i + static_cast<int>(rng.below(
                           static_cast<std::uint64_t>(spec.n - i)));
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Lit> lits;
  lits.reserve(static_cast<std::size_t>(spec.k));
  for (int i = 0; i < spec.k; ++i)
    lits.emplace_back(pool[static_cast<std::size_t>(i)], rng.coin());
  return Clause(std::move(lits));
}

std::vector<Var> allVars(int n) {
  std::vector<Var> vars;
  vars.reserve(static_cast<std::size_t>(n));
  for (Var v = 1; v <= n; ++v) vars.push_back(v);
  return vars;
}

}  // namespace

CnfFormula gen_uniform(const GenSpec& spec, Rng& rng) {
  checkSpec(spec);
  std::vector<Var> pool = allVars(spec.n);
  std::set<Clause> clauses;
  while (static_cast<int>(clauses.size()) < spec.m)
    clauses.insert(drawClause(spec, rng, pool));
  return CnfFormula(allVars(spec.n),
                    std::vector<Clause>(clauses.begin(), clauses.end()));
}

std::pair<CnfFormula, Assignment> gen_planted(const GenSpec& spec, Rng& rng) {
  checkSpec(spec);
  Assignment hidden;
  for (Var v = 1; v <= spec.n; ++v) hidden.set(v, rng.coin());
  std::vector<Var> pool = allVars(spec.n);
  std::set<Clause> clauses;
  while (static_cast<int>(clauses.size()) < spec.m) {
    Clause c = drawClause(spec, rng, pool);
    if (!c.satisfiedBy(hidden)) continue;  // redraw falsified clauses
    clauses.insert(std::move(c));
  }
  return {CnfFormula(allVars(spec.n),
                     std::vector<Clause>(clauses.begin(), clauses.end())),
          std::move(hidden)};
}

std::optional<std::pair<CnfFormula, Assignment>> gen_unique_sat(
    const GenSpec& spec, Rng& rng, int max_attempts, int enum_cap) {
  if (spec.n > enum_cap)
    throw CapExceeded("gen_unique_sat: n exceeds the enumeration cap");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    auto [f, hidden] = gen_planted(spec, rng);
    const auto models = enumerate_sat(f, enum_cap);
    if (models.size() == 1) return std::make_pair(std::move(f), models[0]);
  }
  return std::nullopt;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Uniform: return "uniform";
    case Family::Planted: return "planted";
    case Family::UniqueSat: return "unique-sat";
  }
  return "unknown";
}

}  // namespace ppszkit
