#include "ppszkit/analysis.hpp"

#include <mpfr.h>

#include <charconv>
#include <cmath>

#include "ppsz_internal.hpp"
#include "ppszkit/error.hpp"
#include "ppszkit/implication.hpp"
#include "ppszkit/ppsz.hpp"

namespace ppszkit {

std::string toDecimalString(const Rational& q, int digits) {
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  const bool neg = num < 0;
  if (neg) num = -num;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(),
              mpz_class(num * scale).get_mpz_t(), den.get_mpz_t());
  if (mpz_class(2 * rem) >= den) quot += 1;
  std::string frac = mpz_class(quot % scale).get_str();
  std::string whole = mpz_class(quot / scale).get_str();
  if (static_cast<int>(frac.size()) < digits)
    frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(),
                '0');
  std::string out = neg ? "-" : "";
  out += whole;
  if (digits > 0) {
    out += '.';
    out += frac;
  }
  return out;
}

namespace {

std::string jsonDouble(double x) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  std::string s(buf, p);
  // Bare integers are still valid JSON numbers; keep as is.
  return s;
}

std::string jsonEscape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

Rational mpfrToRational(const mpfr_t x) {
  mpz_t z;
  mpz_init(z);
  const mpfr_exp_t e = mpfr_get_z_2exp(z, x);
  Rational q{mpz_class(z)};
  mpz_clear(z);
  if (e >= 0)
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(),
                 static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(),
                 static_cast<mp_bitcnt_t>(-e));
  q.canonicalize();
  return q;
}

/// Dyadic bracket [lo, hi] with lo <= 2^{-c} <= hi, by directed rounding.
std::pair<Rational, Rational> bracketExp2Neg(const Rational& c,
                                             mpfr_prec_t prec) {
  mpfr_t cf, r;
  mpfr_init2(cf, prec);
  mpfr_init2(r, prec);
  std::pair<Rational, Rational> out;

  // Upper: round c down, negate, exp2 rounded up.
  mpfr_set_q(cf, c.get_mpq_t(), MPFR_RNDD);
  mpfr_neg(cf, cf, MPFR_RNDN);  // exact
  mpfr_exp2(r, cf, MPFR_RNDU);
  out.second = mpfrToRational(r);

  // Lower: round c up, negate, exp2 rounded down.
  mpfr_set_q(cf, c.get_mpq_t(), MPFR_RNDU);
  mpfr_neg(cf, cf, MPFR_RNDN);
  mpfr_exp2(r, cf, MPFR_RNDD);
  out.first = mpfrToRational(r);

  mpfr_clear(cf);
  mpfr_clear(r);
  return out;
}

/// Rigorously decides psuccess >= 2^{-c}; also reports a certified margin
/// bound (lhs - upper bracket on pass, lhs - lower bracket on fail).
struct BoundCheck {
  bool pass = false;
  double rhs = 0;
  double margin = 0;
};

BoundCheck checkSuccessBound(const Rational& psuccess, const Rational& c) {
  BoundCheck out;
  if (c.get_den() == 1) {  // 2^{-c} is exactly representable
    const unsigned long e = mpz_get_ui(c.get_num().get_mpz_t());
    Rational rhs{1};
    mpq_div_2exp(rhs.get_mpq_t(), rhs.get_mpq_t(), e);
    out.pass = psuccess >= rhs;
    out.rhs = toDouble(rhs);
    out.margin = toDouble(psuccess - rhs);
    return out;
  }
  for (mpfr_prec_t prec = 128; prec <= 4096; prec *= 2) {
    const auto [lo, hi] = bracketExp2Neg(c, prec);
    if (psuccess >= hi) {
      out.pass = true;
      out.rhs = toDouble(hi);
      out.margin = toDouble(psuccess - hi);
      return out;
    }
    if (psuccess < lo) {
      out.pass = false;
      out.rhs = toDouble(lo);
      out.margin = toDouble(psuccess - lo);
      return out;
    }
  }
  // Unreachable for rational psuccess and irrational 2^{-c}; treat an
  // undecided comparison as a failure rather than a silent pass.
  out.pass = false;
  out.rhs = toDouble(c);
  out.margin = 0;
  return out;
}

int boundWidth(const CnfFormula& f) { return std::max(3, f.maxWidth()); }

}  // namespace

void VerificationReport::add(std::string name, double lhs, double rhs,
                             double margin, bool ok) {
  checks.push_back({std::move(name), lhs, rhs, margin, ok});
  pass = pass && ok;
}

std::string VerificationReport::toJson() const {
  std::string out = "{\"instance\":\"" + jsonEscape(instance) +
                    "\",\"checks\":[";
  bool first = true;
  for (const CheckRecord& c : checks) {
    if (!first) out += ',';
    first = false;
    out += "{\"name\":\"" + jsonEscape(c.name) + "\",\"lhs\":" +
           jsonDouble(c.lhs) + ",\"rhs\":" + jsonDouble(c.rhs) +
           ",\"margin\":" + jsonDouble(c.margin) + ",\"pass\":" +
           (c.pass ? "true" : "false") + "}";
  }
  out += "],\"pass\":";
  out += pass ? "true" : "false";
  out += "}";
  return out;
}

VerificationReport verify_cost_bound(const CnfFormula& f, int s, int enum_cap,
                                     const std::string& instance_id) {
  VerificationReport report;
  report.instance = instance_id;
  const SkValue& sk = cached_sk(boundWidth(f));
  const Rational ps = psuccess_exact(f, s, enum_cap);
  const CostValue c = cost_total(f, s, sk.upper_rational, enum_cap);
  const BoundCheck bc = checkSuccessBound(ps, c.value);
  report.add("cost-bound", toDouble(ps), bc.rhs, bc.margin, bc.pass);
  return report;
}

VerificationReport verify_cost_decrease(const CnfFormula& f, int s,
                                        int enum_cap,
                                        const std::string& instance_id) {
  VerificationReport report;
  report.instance = instance_id;
  {
    const FixpointResult fx = fix_implied(f, s);
    if (fx.contradiction || !fx.fixed.empty())
      throw ContractViolation(
          "verify_cost_decrease: formula is not s-implication free");
  }
  if (f.n() == 0) {
    report.add("cost-decrease", 0, 0, 0, true);
    return report;
  }
  const Rational S = cached_sk(boundWidth(f)).upper_rational;
  const auto sl = satisfying_literals(f, enum_cap);
  const auto part = frozen_partition(f, enum_cap);
  const auto slCount = static_cast<long>(sl.size());
  const CostBreakdown base = cost_breakdown(f, s, S, enum_cap);

  // Expected per-variable and total cost of F^[l] for l uniform in SL(F).
  std::vector<std::pair<Var, Rational>> expVar;
  for (Var v : f.vars()) expVar.emplace_back(v, Rational{0});
  Rational expTotal{0};
  for (Lit l : sl) {
    const CostBreakdown child =
        cost_breakdown(f.restricted(l), s, S, enum_cap);
    expTotal += child.total;
    for (const auto& [v, q] : child.per_var)
      for (auto& [w, acc] : expVar)
        if (w == v) {
          acc += q;
          break;
        }
  }
  expTotal /= slCount;
  for (auto& [v, q] : expVar) q /= slCount;

  {
    const Rational nN{static_cast<long>(part.non_frozen.size())};
    const Rational nC{static_cast<long>(part.frozen.size())};
    const Rational rhs = base.total - 2 * nN * S / slCount - nC / slCount;
    report.add("cost-decrease", toDouble(expTotal), toDouble(rhs),
               toDouble(rhs - expTotal), expTotal <= rhs);
  }
  auto baseVar = [&](Var v) -> const Rational& {
    for (const auto& [w, q] : base.per_var)
      if (w == v) return q;
    throw Error("internal: missing per-variable cost");
  };
  for (Var v : part.non_frozen) {
    const Rational lhs = [&] {
      for (const auto& [w, q] : expVar)
        if (w == v) return q;
      throw Error("internal: missing expectation");
    }();
    const Rational rhs = baseVar(v) - 2 * S / slCount;
    report.add("noncrit-decrease(x" + std::to_string(v) + ")", toDouble(lhs),
               toDouble(rhs), toDouble(rhs - lhs), lhs <= rhs);
  }
  for (Var v : part.frozen) {
    const Rational lhs = [&] {
      for (const auto& [w, q] : expVar)
        if (w == v) return q;
      throw Error("internal: missing expectation");
    }();
    const Rational rhs = baseVar(v) - Rational{1} / slCount;
    report.add("crit-decrease(x" + std::to_string(v) + ")", toDouble(lhs),
               toDouble(rhs), toDouble(rhs - lhs), lhs <= rhs);
  }
  return report;
}

VerificationReport verify_pguessed_lemmas(const CnfFormula& f, int s,
                                          int perm_cap,
                                          const std::string& instance_id) {
  VerificationReport report;
  report.instance = instance_id;
  const auto models = enumerate_sat(f, perm_cap);
  if (models.empty())
    throw ContractViolation("verify_pguessed_lemmas: formula unsatisfiable");
  const Rational S = cached_sk(boundWidth(f)).upper_rational;
  const auto part = frozen_partition(f, perm_cap);
  auto isFrozen = [&](Var v) {
    for (Var w : part.frozen)
      if (w == v) return true;
    return false;
  };
  const Rational cF = cost_total(f, s, S, perm_cap).value;
  const FixpointResult fx = fix_implied(f, s);

  int alphaIdx = 0;
  for (const Assignment& alpha : models) {
    const std::string tag = ",a" + std::to_string(alphaIdx);
    const auto pgPerm = pguessed_exact_perm_all(f, alpha, s, perm_cap);
    const auto pgRec = pguessed_exact_all(f, alpha, s, perm_cap);
    for (std::size_t i = 0; i < pgPerm.size(); ++i) {
      report.add("oracle-agreement(x" + std::to_string(pgPerm[i].first) + tag +
                     ")",
                 toDouble(pgPerm[i].second), toDouble(pgRec[i].second), 0,
                 pgPerm[i].second == pgRec[i].second);
    }
    const Rational pF = p_exact(f, alpha, perm_cap);
    for (Lit l : alpha.restrictedTo(f.vars()).literals()) {
      const CnfFormula child = f.restricted(l);
      const std::string ltag = ",l" + l.str() + tag;
      const Rational pC = p_exact(child, alpha, perm_cap);
      report.add("p-monotone(" + ltag.substr(1) + ")", toDouble(pC),
                 toDouble(pF), toDouble(pC - pF), pC >= pF);
      if (isFrozen(l.var())) {
        report.add("p-frozen-equal(" + ltag.substr(1) + ")", toDouble(pC),
                   toDouble(pF), 0, pC == pF);
        const Rational cChild = cost_total(child, s, S, perm_cap).value;
        report.add("cost-frozen-monotone(" + ltag.substr(1) + ")",
                   toDouble(cChild), toDouble(cF), toDouble(cF - cChild),
                   cChild <= cF);
      }
      const auto pgChild = pguessed_exact_all(child, alpha, s, perm_cap);
      for (const auto& [v, q] : pgChild) {
        const Rational& base = [&]() -> const Rational& {
          for (const auto& [w, b] : pgPerm)
            if (w == v) return b;
          throw Error("internal: variable missing from permutation oracle");
        }();
        report.add("pguessed-monotone(x" + std::to_string(v) + ltag + ")",
                   toDouble(q), toDouble(base), toDouble(base - q), q <= base);
      }
    }
    ++alphaIdx;
  }

  // Reduction identity on the implication-free residual.
  const CnfFormula& res = fx.residual;
  if (!fx.contradiction && res.n() >= 1) {
    const auto resModels = enumerate_sat(res, perm_cap);
    const long n = res.n();
    int ri = 0;
    for (const Assignment& alpha : resModels) {
      const auto pgF = pguessed_exact_all(res, alpha, s, perm_cap);
      std::vector<Rational> sums(pgF.size(), Rational{0});
      for (Lit l : alpha.restrictedTo(res.vars()).literals()) {
        const auto pgC = pguessed_exact_all(res.restricted(l), alpha, s,
                                            perm_cap);
        for (std::size_t i = 0, j = 0; i < pgF.size(); ++i) {
          if (pgF[i].first == l.var()) continue;  // eliminated, contributes 0
          while (j < pgC.size() && pgC[j].first != pgF[i].first) ++j;
          if (j < pgC.size()) sums[i] += pgC[j].second;
        }
      }
      for (std::size_t i = 0; i < pgF.size(); ++i) {
        const Rational lhs = pgF[i].second - Rational{1} / n;
        const Rational rhs = sums[i] / n;
        report.add("pguessed-reduced(x" + std::to_string(pgF[i].first) +
                       ",a" + std::to_string(ri) + ")",
                   toDouble(lhs), toDouble(rhs), 0, lhs == rhs);
      }
      ++ri;
    }
  }
  return report;
}

GuessRateReport measure_guess_rate(const CnfFormula& f, int s,
                                   std::uint64_t trials, Rng& rng,
                                   int enum_cap) {
  GuessRateReport out;
  out.s = s;
  out.trials = trials;
  out.sk = static_cast<double>(cached_sk(boundWidth(f)).value);
  const auto model = dpll_solve(f);
  if (!model)
    throw ContractViolation("measure_guess_rate: formula is unsatisfiable");
  const auto part = frozen_partition(f, enum_cap);
  auto isFrozen = [&](Var v) {
    for (Var w : part.frozen)
      if (w == v) return true;
    return false;
  };
  const auto plan = detail::buildPlan(f, s);
  const int n = plan->map.size();
  std::uint64_t betaMask = 0;
  for (int i = 0; i < n; ++i)
    if (*model->value(plan->map.varOf(i))) betaMask |= detail::bit(i);

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
  std::vector<int> perm(static_cast<std::size_t>(n));
  detail::RunState scratch;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    rng.shuffle(perm);
    std::uint64_t value = 0, guessed = 0;
    const bool ok = detail::runTrial(*plan, scratch, betaMask, perm, &value,
                                     &guessed);
    (void)ok;
    for (std::uint64_t m = guessed; m; m &= m - 1)
      ++counts[static_cast<std::size_t>(std::countr_zero(m))];
  }
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(trials);
  for (int i = 0; i < n; ++i) {
    GuessRateEntry e;
    e.var = plan->map.varOf(i);
    e.frozen = isFrozen(e.var);
    const double ph = static_cast<double>(counts[static_cast<std::size_t>(i)]) / nn;
    const double denom = 1.0 + z * z / nn;
    const double center = ph + z * z / (2.0 * nn);
    const double rad =
        z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn));
    e.rate = ph;
    e.ci_low = std::max(0.0, (center - rad) / denom);
    e.ci_high = std::min(1.0, (center + rad) / denom);
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace ppszkit
