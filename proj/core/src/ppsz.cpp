#include "ppszkit/ppsz.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "ppsz_internal.hpp"
#include "ppszkit/analysis.hpp"
#include "ppszkit/error.hpp"

namespace ppszkit {

namespace detail {

std::unique_ptr<PpszPlan> buildPlan(const CnfFormula& f, int s) {
  if (s < 0 || s > kMaxS)
    throw ContractViolation("s must be in [0, " + std::to_string(kMaxS) + "]");
  auto plan = std::make_unique<PpszPlan>();
  plan->s = s;
  plan->map = makeVarMap(f);
  plan->packedRoot = pack(f, plan->map);
  plan->root = RootIndex::build(plan->packedRoot, s);
  plan->afterRootFix = RunState(&plan->root);
  plan->rootFixResult = plan->afterRootFix.fixToQuiescence(&plan->rootForced);
  return plan;
}

bool runTrial(const PpszPlan& plan, RunState& scratch, std::uint64_t betaMask,
              const std::vector<int>& perm, std::uint64_t* valueOut,
              std::uint64_t* guessedOut) {
  if (plan.rootFixResult != RunState::FixResult::Quiet) return false;
  scratch = plan.afterRootFix;
  std::uint64_t value = 0;
  std::uint64_t guessed = 0;
  for (auto [idx, v] : plan.rootForced)
    if (v) value |= bit(idx);

  for (int idx : perm) {
    {  // fix s-implied literals before handling idx
      std::vector<std::pair<int, bool>> forced;
      const auto r = scratch.fixToQuiescence(&forced);
      for (auto [fi, fv] : forced)
        if (fv) value |= bit(fi);
      if (r != RunState::FixResult::Quiet) return false;
    }
    if (!scratch.varAlive(idx)) continue;
    const bool v = (betaMask & bit(idx)) != 0;
    scratch.assign(idx, v);
    guessed |= bit(idx);
    if (v) value |= bit(idx);
    if (scratch.emptyClauseSeen()) return false;
  }
  if (valueOut) *valueOut = value;
  if (guessedOut) *guessedOut = guessed;
  return true;
}

}  // namespace detail

namespace {

Assignment maskToAssignment(const detail::VarMap& map, std::uint64_t value) {
  Assignment a;
  for (int i = 0; i < map.size(); ++i)
    a.set(map.varOf(i), (value & detail::bit(i)) != 0);
  return a;
}

}  // namespace

std::pair<Assignment, RunTrace> ppsz_run(const CnfFormula& f,
                                         const Assignment& beta,
                                         const std::vector<Var>& pi, int s) {
  if (s < 0 || s > kMaxS)
    throw ContractViolation("s must be in [0, " + std::to_string(kMaxS) + "]");
  if (!beta.totalOn(f.vars()))
    throw ContractViolation("ppsz_run: beta is not total on V(F)");
  {
    std::vector<Var> sorted = pi;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != f.vars())
      throw ContractViolation("ppsz_run: pi is not a permutation of V(F)");
  }
  const auto map = detail::makeVarMap(f);
  const auto packed = pack(f, map);
  const auto root = detail::RootIndex::build(packed, s);
  detail::RunState st(&root);

  Assignment alpha;
  RunTrace trace;
  std::vector<std::pair<int, bool>> forced;

  auto fixNow = [&]() -> std::optional<RunOutcome> {
    forced.clear();
    const auto r = st.fixToQuiescence(&forced);
    for (auto [idx, value] : forced) {
      alpha.set(map.varOf(idx), value);
      trace.steps.push_back({map.varOf(idx), value, StepMode::Forced});
    }
    if (r == detail::RunState::FixResult::EmptyClause)
      return RunOutcome::Falsified;
    if (r == detail::RunState::FixResult::Contradiction)
      return RunOutcome::Contradiction;
    return std::nullopt;
  };

  for (Var x : pi) {
    if (auto abort = fixNow()) {
      trace.outcome = *abort;
      return {alpha, trace};
    }
    const int idx = map.indexOf(x);
    if (!st.varAlive(idx)) continue;
    const bool value = *beta.value(x);
    st.assign(idx, value);
    alpha.set(x, value);
    trace.steps.push_back({x, value, StepMode::Guessed});
    if (st.emptyClauseSeen()) {
      trace.outcome = RunOutcome::Falsified;
      return {alpha, trace};
    }
  }
  trace.outcome = RunOutcome::Satisfying;
  return {alpha, trace};
}

std::optional<Assignment> ppsz_random(const CnfFormula& f, int s, Rng& rng) {
  const auto plan = detail::buildPlan(f, s);
  std::uint64_t beta = 0;
  for (int i = 0; i < plan->map.size(); ++i)
    if (rng.coin()) beta |= detail::bit(i);
  std::vector<int> perm(static_cast<std::size_t>(plan->map.size()));
  for (int i = 0; i < plan->map.size(); ++i)
    perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);

  detail::RunState scratch;
  std::uint64_t value = 0;
  if (!detail::runTrial(*plan, scratch, beta, perm, &value)) return std::nullopt;
  Assignment a = maskToAssignment(plan->map, value);
  if (!f.satisfiedBy(a)) return std::nullopt;
  return a;
}

std::uint64_t auto_repetitions(const CnfFormula& f, const AutoReps& reps) {
  if (!(reps.epsilon > 0))
    throw ContractViolation("auto repetitions require epsilon > 0");
  if (!(reps.delta > 0 && reps.delta < 1))
    throw ContractViolation("auto repetitions require 0 < delta < 1");
  const int k = std::max(3, f.maxWidth());
  const SkValue sk = compute_sk(k);
  const long double exponent =
      (static_cast<long double>(sk.value) + reps.epsilon) * f.n();
  const long double budget =
      std::log(1.0L / reps.delta) * std::exp2(exponent);
  if (budget >= 1e18L) return UINT64_MAX;
  const auto r = static_cast<std::uint64_t>(std::ceil(budget));
  return r == 0 ? 1 : r;
}

SolveResult solve(const CnfFormula& f, const SolveConfig& cfg) {
  std::uint64_t reps;
  if (std::holds_alternative<std::uint64_t>(cfg.repetitions)) {
    reps = std::get<std::uint64_t>(cfg.repetitions);
    if (reps == 0) throw ContractViolation("repetitions must be positive");
  } else {
    reps = auto_repetitions(f, std::get<AutoReps>(cfg.repetitions));
    if (reps > cfg.trial_budget)
      throw BudgetExceeded("auto repetition count " + std::to_string(reps) +
                           " exceeds trial budget " +
                           std::to_string(cfg.trial_budget));
  }
  const auto plan = detail::buildPlan(f, cfg.s);
  const int n = plan->map.size();

  unsigned threads = cfg.threads > 0
                         ? static_cast<unsigned>(cfg.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, 64);

  const std::uint64_t kChunk = 1024ull * threads;
  for (std::uint64_t start = 0; start < reps;) {
    const std::uint64_t end = std::min(reps, start + kChunk);
    std::atomic<bool> found{false};
    std::vector<std::pair<std::uint64_t, std::uint64_t>> hits;  // (trial, value)
    std::mutex hitsMutex;

    auto worker = [&](unsigned wid) {
      detail::RunState scratch;
      std::vector<int> perm(static_cast<std::size_t>(n));
      for (std::uint64_t t = start + wid; t < end; t += threads) {
        Rng rng = Rng::forStream(cfg.seed, t);
        std::uint64_t beta = 0;
        for (int i = 0; i < n; ++i)
          if (rng.coin()) beta |= detail::bit(i);
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        rng.shuffle(perm);
        std::uint64_t value = 0;
        if (detail::runTrial(*plan, scratch, beta, perm, &value)) {
          std::lock_guard<std::mutex> lock(hitsMutex);
          hits.emplace_back(t, value);
          found.store(true, std::memory_order_relaxed);
        }
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
      for (auto& th : pool) th.join();
    }
    if (!hits.empty()) {
      auto best = *std::min_element(hits.begin(), hits.end());
      Assignment model = maskToAssignment(plan->map, best.second);
      if (!f.satisfiedBy(model))
        throw Error("internal error: unverified model from PPSZ trial");
      return SatResult{std::move(model), best.first, reps};
    }
    start = end;
  }
  return UnsatResult{reps};
}

}  // namespace ppszkit
