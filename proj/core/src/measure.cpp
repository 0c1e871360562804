#include "ppszkit/measure.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <unordered_map>

#include "packed.hpp"
#include "ppsz_internal.hpp"
#include "ppszkit/error.hpp"

namespace ppszkit {

namespace {

using detail::bit;
using detail::ModelTable;
using detail::PackedFormula;
using detail::PackedFormulaHash;
using detail::popcount;
using detail::RootIndex;
using detail::RunState;
using detail::VarMap;

void checkS(int s) {
  if (s < 0 || s > kMaxS)
    throw ContractViolation("s must be in [0, " + std::to_string(kMaxS) + "]");
}

struct FixInfo {
  PackedFormula residual;
  std::uint64_t forcedMask = 0;
  std::uint64_t forcedValues = 0;
  bool contra = false;
};

struct FormulaInfo {
  bool satisfiable = false;
  std::uint64_t slPos = 0, slNeg = 0;
  int slCount = 0;
};

/// alpha-dependent memo key: the formula plus alpha restricted to its
/// variables (states reached with agreeing alphas share results).
struct AKey {
  PackedFormula f;
  std::uint64_t av = 0;

  friend bool operator==(const AKey& a, const AKey& b) {
    return a.av == b.av && a.f == b.f;
  }
};
struct AKeyHash {
  std::size_t operator()(const AKey& k) const {
    std::uint64_t h = PackedFormulaHash{}(k.f);
    h ^= k.av + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Per-call-tree exact computation context. Caches are confined here and
/// never shared across top-level calls.
struct ExactCtx {
  VarMap map;
  PackedFormula root;
  ModelTable models;
  int s = 0;

  std::unordered_map<PackedFormula, FixInfo, PackedFormulaHash> fixCache;
  std::unordered_map<PackedFormula, FormulaInfo, PackedFormulaHash> infoCache;
  std::unordered_map<PackedFormula, Rational, PackedFormulaHash> psMemo;
  std::unordered_map<AKey, Rational, AKeyHash> pMemo;
  std::unordered_map<AKey, std::vector<Rational>, AKeyHash> pgMemo;

  const FixInfo& fixinfo(const PackedFormula& f) {
    auto it = fixCache.find(f);
    if (it != fixCache.end()) return it->second;
    FixInfo info;
    const RootIndex idx = RootIndex::build(f, s);
    RunState st(&idx);
    std::vector<std::pair<int, bool>> forced;
    const auto r = st.fixToQuiescence(&forced);
    for (auto [v, value] : forced) {
      info.forcedMask |= bit(v);
      if (value) info.forcedValues |= bit(v);
    }
    info.contra = r != RunState::FixResult::Quiet;
    info.residual = st.snapshot();
    return fixCache.emplace(f, std::move(info)).first->second;
  }

  /// Satisfiability and SL of a restriction, resolved through model
  /// extensions of any path that reaches it (the result is intrinsic to the
  /// formula).
  const FormulaInfo& info(const PackedFormula& f, std::uint64_t aMask,
                          std::uint64_t vMask) {
    auto it = infoCache.find(f);
    if (it != infoCache.end()) return it->second;
    FormulaInfo fi;
    fi.satisfiable = models.compatible(aMask, vMask);
    for (std::uint64_t m = f.alive; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      if (models.compatible(aMask | bit(v), vMask | bit(v))) {
        fi.slPos |= bit(v);
        ++fi.slCount;
      }
      if (models.compatible(aMask | bit(v), vMask)) {
        fi.slNeg |= bit(v);
        ++fi.slCount;
      }
    }
    return infoCache.emplace(f, fi).first->second;
  }
};

ExactCtx makeCtx(const CnfFormula& f, int s, int enum_cap) {
  checkS(s);
  if (f.n() > enum_cap)
    throw CapExceeded("n=" + std::to_string(f.n()) +
                      " exceeds the enumeration cap " +
                      std::to_string(enum_cap));
  ExactCtx ctx;
  ctx.map = detail::makeVarMap(f);
  ctx.root = pack(f, ctx.map);
  ctx.models = ModelTable::enumerate(ctx.root);
  ctx.s = s;
  return ctx;
}

std::uint64_t alphaValueMask(const ExactCtx& ctx, const Assignment& alpha,
                             const CnfFormula& f) {
  for (Var v : f.vars())
    if (!alpha.binds(v))
      throw ContractViolation("assignment is not total on V(F)");
  std::uint64_t av = 0;
  for (int i = 0; i < ctx.map.size(); ++i)
    if (*alpha.value(ctx.map.varOf(i))) av |= bit(i);
  return av;
}

bool isModel(const ExactCtx& ctx, std::uint64_t av) {
  return ctx.models.compatible(ctx.root.alive, av);
}

Rational psuccessRec(ExactCtx& ctx, const PackedFormula& f,
                     std::uint64_t aMask, std::uint64_t vMask) {
  auto it = ctx.psMemo.find(f);
  if (it != ctx.psMemo.end()) return it->second;
  const FixInfo& fx = ctx.fixinfo(f);
  assert(!fx.contra);
  const std::uint64_t a2 = aMask | fx.forcedMask;
  const std::uint64_t v2 = vMask | fx.forcedValues;
  Rational out;
  const PackedFormula& r = fx.residual;
  if (r.alive == 0) {
    out = 1;
  } else {
    const FormulaInfo& fi = ctx.info(r, a2, v2);
    Rational acc{0};
    for (std::uint64_t m = r.alive; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      if (fi.slPos & bit(v))
        acc += psuccessRec(ctx, r.restricted(v, true), a2 | bit(v),
                           v2 | bit(v));
      if (fi.slNeg & bit(v))
        acc += psuccessRec(ctx, r.restricted(v, false), a2 | bit(v), v2);
    }
    out = acc / (2 * r.n());
  }
  return ctx.psMemo.emplace(f, std::move(out)).first->second;
}

Rational pRec(ExactCtx& ctx, const PackedFormula& f, std::uint64_t aMask,
              std::uint64_t vMask, std::uint64_t alphaValues) {
  if (f.alive == 0) return Rational{1};
  AKey key{f, alphaValues & f.alive};
  auto it = ctx.pMemo.find(key);
  if (it != ctx.pMemo.end()) return it->second;
  const FormulaInfo& fi = ctx.info(f, aMask, vMask);
  Rational acc{0};
  for (std::uint64_t m = f.alive; m; m &= m - 1) {
    const int v = std::countr_zero(m);
    const bool b = (alphaValues & bit(v)) != 0;
    if (b ? (fi.slPos & bit(v)) : (fi.slNeg & bit(v))) {
      acc += pRec(ctx, f.restricted(v, b), aMask | bit(v),
                  b ? (vMask | bit(v)) : vMask, alphaValues);
    }
  }
  acc /= fi.slCount;
  return ctx.pMemo.emplace(std::move(key), std::move(acc)).first->second;
}

/// Guessed probabilities for every variable of the (implication-free,
/// satisfiable) formula w.r.t. alpha, via the restriction recurrence.
const std::vector<Rational>& pgRec(ExactCtx& ctx, const PackedFormula& f,
                                   std::uint64_t aMask, std::uint64_t vMask,
                                   std::uint64_t alphaValues) {
  AKey key{f, alphaValues & f.alive};
  auto it = ctx.pgMemo.find(key);
  if (it != ctx.pgMemo.end()) return it->second;
  const int n = f.n();
  std::vector<Rational> vec(static_cast<std::size_t>(ctx.map.size()),
                            Rational{0});
  for (std::uint64_t m = f.alive; m; m &= m - 1) {
    const int w = std::countr_zero(m);
    const bool b = (alphaValues & bit(w)) != 0;
    const PackedFormula child = f.restricted(w, b);
    const std::uint64_t ca = aMask | bit(w);
    const std::uint64_t cv = b ? (vMask | bit(w)) : vMask;
    const FixInfo& fx = ctx.fixinfo(child);
    assert(!fx.contra);
    if (fx.residual.alive == 0) continue;
    const auto& childVec = pgRec(ctx, fx.residual, ca | fx.forcedMask,
                                 cv | fx.forcedValues, alphaValues);
    for (std::uint64_t mm = f.alive & ~bit(w) & fx.residual.alive; mm;
         mm &= mm - 1) {
      const int v = std::countr_zero(mm);
      vec[static_cast<std::size_t>(v)] += childVec[static_cast<std::size_t>(v)];
    }
  }
  for (std::uint64_t m = f.alive; m; m &= m - 1) {
    const int v = std::countr_zero(m);
    auto& q = vec[static_cast<std::size_t>(v)];
    q += 1;
    q /= n;
  }
  return ctx.pgMemo.emplace(std::move(key), std::move(vec)).first->second;
}

void requireSatisfiable(const ExactCtx& ctx, const char* op) {
  if (ctx.models.models.empty())
    throw ContractViolation(std::string(op) + ": formula is unsatisfiable");
}

void requireModel(const ExactCtx& ctx, std::uint64_t av, const char* op) {
  if (!isModel(ctx, av))
    throw ContractViolation(std::string(op) +
                            ": alpha does not satisfy the formula");
}

}  // namespace

Assignment assign_satisfiable_literals(const CnfFormula& f, Rng& rng,
                                       int enum_cap) {
  ExactCtx ctx = makeCtx(f, 0, enum_cap);
  requireSatisfiable(ctx, "assign_satisfiable_literals");
  std::uint64_t aMask = 0, vMask = 0;
  const int n = ctx.map.size();
  std::vector<std::pair<int, bool>> sl;
  while (popcount(aMask) < n) {
    sl.clear();
    for (int v = 0; v < n; ++v) {
      if (aMask & bit(v)) continue;
      if (ctx.models.compatible(aMask | bit(v), vMask | bit(v)))
        sl.emplace_back(v, true);
      if (ctx.models.compatible(aMask | bit(v), vMask))
        sl.emplace_back(v, false);
    }
    const auto pick = sl[static_cast<std::size_t>(
        rng.below(static_cast<std::uint64_t>(sl.size())))];
    aMask |= bit(pick.first);
    if (pick.second) vMask |= bit(pick.first);
  }
  Assignment out;
  for (int i = 0; i < n; ++i)
    out.set(ctx.map.varOf(i), (vMask & bit(i)) != 0);
  return out;
}

Rational p_exact(const CnfFormula& f, const Assignment& alpha, int enum_cap) {
  ExactCtx ctx = makeCtx(f, 0, enum_cap);
  requireSatisfiable(ctx, "p_exact");
  const std::uint64_t av = alphaValueMask(ctx, alpha, f);
  if (!isModel(ctx, av)) return Rational{0};
  return pRec(ctx, ctx.root, 0, 0, av);
}

std::vector<std::pair<Var, Rational>> pguessed_exact_perm_all(
    const CnfFormula& f, const Assignment& alpha, int s, int perm_cap) {
  checkS(s);
  if (f.n() > perm_cap)
    throw CapExceeded("n=" + std::to_string(f.n()) +
                      " exceeds the permutation cap " +
                      std::to_string(perm_cap));
  const auto plan = detail::buildPlan(f, s);
  const int n = plan->map.size();
  {
    // alpha must satisfy f
    for (Var v : f.vars())
      if (!alpha.binds(v))
        throw ContractViolation("pguessed_exact_perm: alpha not total on V(F)");
    if (!f.satisfiedBy(alpha))
      throw ContractViolation(
          "pguessed_exact_perm: alpha does not satisfy the formula");
  }
  std::uint64_t betaMask = 0;
  for (int i = 0; i < n; ++i)
    if (*alpha.value(plan->map.varOf(i))) betaMask |= bit(i);

  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::vector<std::uint64_t> guessedCount(static_cast<std::size_t>(n), 0);
  std::uint64_t total = 0;
  RunState scratch;
  do {
    std::uint64_t value = 0, guessed = 0;
    const bool ok =
        detail::runTrial(*plan, scratch, betaMask, perm, &value, &guessed);
    assert(ok);  // runs with a satisfying beta always complete
    (void)ok;
    for (std::uint64_t m = guessed; m; m &= m - 1)
      ++guessedCount[static_cast<std::size_t>(std::countr_zero(m))];
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::pair<Var, Rational>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rational q(guessedCount[static_cast<std::size_t>(i)]);
    q /= total;
    out.emplace_back(plan->map.varOf(i), std::move(q));
  }
  return out;
}

Rational pguessed_exact_perm(const CnfFormula& f, Var x,
                             const Assignment& alpha, int s, int perm_cap) {
  if (!f.hasVar(x)) return Rational{0};
  for (auto& [v, q] : pguessed_exact_perm_all(f, alpha, s, perm_cap))
    if (v == x) return q;
  return Rational{0};
}

Rational pguessed_exact_rec(const CnfFormula& f, Var x,
                            const Assignment& alpha, int s, int enum_cap) {
  ExactCtx ctx = makeCtx(f, s, enum_cap);
  requireSatisfiable(ctx, "pguessed_exact_rec");
  const std::uint64_t av = alphaValueMask(ctx, alpha, f);
  requireModel(ctx, av, "pguessed_exact_rec");
  const FixInfo& fx = ctx.fixinfo(ctx.root);
  if (fx.forcedMask != 0 || fx.contra)
    throw ContractViolation(
        "pguessed_exact_rec: formula is not s-implication free");
  if (!f.hasVar(x)) return Rational{0};
  const auto& vec = pgRec(ctx, ctx.root, 0, 0, av);
  return vec[static_cast<std::size_t>(ctx.map.indexOf(x))];
}

Rational pguessed_exact(const CnfFormula& f, Var x, const Assignment& alpha,
                        int s, int enum_cap) {
  ExactCtx ctx = makeCtx(f, s, enum_cap);
  requireSatisfiable(ctx, "pguessed_exact");
  const std::uint64_t av = alphaValueMask(ctx, alpha, f);
  requireModel(ctx, av, "pguessed_exact");
  if (!f.hasVar(x)) return Rational{0};
  const FixInfo& fx = ctx.fixinfo(ctx.root);
  const int idx = ctx.map.indexOf(x);
  if (fx.forcedMask & bit(idx)) return Rational{0};
  if (fx.residual.alive == 0) return Rational{0};
  const auto& vec =
      pgRec(ctx, fx.residual, fx.forcedMask, fx.forcedValues, av);
  return vec[static_cast<std::size_t>(idx)];
}

std::vector<std::pair<Var, Rational>> pguessed_exact_all(const CnfFormula& f,
                                                         const Assignment& alpha,
                                                         int s, int enum_cap) {
  ExactCtx ctx = makeCtx(f, s, enum_cap);
  requireSatisfiable(ctx, "pguessed_exact");
  const std::uint64_t av = alphaValueMask(ctx, alpha, f);
  requireModel(ctx, av, "pguessed_exact");
  const FixInfo& fx = ctx.fixinfo(ctx.root);
  std::vector<std::pair<Var, Rational>> out;
  out.reserve(static_cast<std::size_t>(ctx.map.size()));
  if (fx.residual.alive == 0) {
    for (int i = 0; i < ctx.map.size(); ++i)
      out.emplace_back(ctx.map.varOf(i), Rational{0});
    return out;
  }
  const auto& vec =
      pgRec(ctx, fx.residual, fx.forcedMask, fx.forcedValues, av);
  for (int i = 0; i < ctx.map.size(); ++i) {
    Rational q = (fx.residual.alive & bit(i))
                     ? vec[static_cast<std::size_t>(i)]
                     : Rational{0};
    out.emplace_back(ctx.map.varOf(i), std::move(q));
  }
  return out;
}

namespace {

CostBreakdown costBreakdownImpl(ExactCtx& ctx, const CnfFormula& f,
                                const Rational& s_bound) {
  if (!(s_bound > 0 && s_bound <= 1))
    throw ContractViolation("cost: s_bound must lie in (0, 1]");
  requireSatisfiable(ctx, "cost");
  const int n = ctx.map.size();

  // Frozen variables take one value across all models.
  std::uint64_t seen1 = 0, seen0 = 0;
  for (std::uint64_t m : ctx.models.models) {
    seen1 |= m;
    seen0 |= ~m & ctx.root.alive;
  }
  const std::uint64_t nonFrozen = seen1 & seen0;
  const std::uint64_t frozen = ctx.root.alive & ~nonFrozen;

  std::vector<Rational> acc(static_cast<std::size_t>(n), Rational{0});
  const FixInfo& fx = ctx.fixinfo(ctx.root);
  for (std::uint64_t av : ctx.models.models) {
    const Rational pa = pRec(ctx, ctx.root, 0, 0, av);
    if (fx.residual.alive == 0) continue;
    const auto& vec =
        pgRec(ctx, fx.residual, fx.forcedMask, fx.forcedValues, av);
    for (std::uint64_t m = frozen & fx.residual.alive; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      acc[static_cast<std::size_t>(v)] +=
          pa * vec[static_cast<std::size_t>(v)];
    }
  }

  CostBreakdown out;
  out.s_bound = s_bound;
  out.total = 0;
  for (int i = 0; i < n; ++i) {
    Rational c = (nonFrozen & bit(i)) ? s_bound
                                      : acc[static_cast<std::size_t>(i)];
    out.total += c;
    out.per_var.emplace_back(f.vars()[static_cast<std::size_t>(i)],
                             std::move(c));
  }
  return out;
}

}  // namespace

CostBreakdown cost_breakdown(const CnfFormula& f, int s,
                             const Rational& s_bound, int enum_cap) {
  ExactCtx ctx = makeCtx(f, s, enum_cap);
  return costBreakdownImpl(ctx, f, s_bound);
}

CostValue cost(const CnfFormula& f, Var x, int s, const Rational& s_bound,
               int enum_cap) {
  if (!f.hasVar(x)) return CostValue{Rational{0}, s_bound};
  const CostBreakdown bd = cost_breakdown(f, s, s_bound, enum_cap);
  for (const auto& [v, q] : bd.per_var)
    if (v == x) return CostValue{q, s_bound};
  return CostValue{Rational{0}, s_bound};
}

CostValue cost_total(const CnfFormula& f, int s, const Rational& s_bound,
                     int enum_cap) {
  const CostBreakdown bd = cost_breakdown(f, s, s_bound, enum_cap);
  return CostValue{bd.total, s_bound};
}

Rational psuccess_exact(const CnfFormula& f, int s, int enum_cap) {
  ExactCtx ctx = makeCtx(f, s, enum_cap);
  if (ctx.models.models.empty()) return Rational{0};
  return psuccessRec(ctx, ctx.root, 0, 0);
}

Rational psuccess_enumerated(const CnfFormula& f, int s, int cap) {
  checkS(s);
  if (f.n() > cap)
    throw CapExceeded("psuccess_enumerated: n exceeds cap " +
                      std::to_string(cap));
  const auto plan = detail::buildPlan(f, s);
  const int n = plan->map.size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::uint64_t successes = 0, total = 0;
  RunState scratch;
  const std::uint64_t betaEnd = n == 0 ? 1 : (1ull << n);
  for (std::uint64_t beta = 0; beta < betaEnd; ++beta) {
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    do {
      std::uint64_t value = 0;
      if (detail::runTrial(*plan, scratch, beta, perm, &value)) ++successes;
      ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  Rational q(successes);
  q /= total;
  return q;
}

McEstimate psuccess_mc(const CnfFormula& f, int s, std::uint64_t trials,
                       Rng& rng) {
  if (trials == 0) throw ContractViolation("psuccess_mc: trials must be >= 1");
  const auto plan = detail::buildPlan(f, s);
  const int n = plan->map.size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  RunState scratch;
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t beta = 0;
    for (int i = 0; i < n; ++i)
      if (rng.coin()) beta |= bit(i);
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    rng.shuffle(perm);
    std::uint64_t value = 0;
    if (detail::runTrial(*plan, scratch, beta, perm, &value)) ++successes;
  }
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nn;
  const double denom = 1.0 + z * z / nn;
  const double center = ph + z * z / (2.0 * nn);
  const double rad =
      z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn));
  McEstimate est;
  est.estimate = ph;
  est.ci_low = std::max(0.0, (center - rad) / denom);
  est.ci_high = std::min(1.0, (center + rad) / denom);
  est.trials = trials;
  return est;
}

}  // namespace ppszkit
