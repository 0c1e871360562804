#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ppszkit/cnf.hpp"
#include "ppszkit/implication.hpp"
#include "ppszkit/rng.hpp"

namespace ppszkit {

enum class StepMode { Forced, Guessed };
enum class RunOutcome { Satisfying, Falsified, Contradiction };

struct RunStep {
  Var var;
  bool value;
  StepMode mode;
};

/// Per-variable record of one PPSZ run, in processing order.
struct RunTrace {
  std::vector<RunStep> steps;
  RunOutcome outcome = RunOutcome::Satisfying;
};

/// One PPSZ pass: visit variables in pi order; before each, restrict by
/// s-implied literals (Forced) until none remains; if the variable is still
/// present, restrict by beta's value for it (Guessed). Aborts on an empty
/// clause (Falsified) or an implication contradiction (Contradiction); the
/// partial assignment returned in that case cannot satisfy f.
/// Requires beta total on V(f) and pi a permutation of V(f).
std::pair<Assignment, RunTrace> ppsz_run(const CnfFormula& f,
                                         const Assignment& beta,
                                         const std::vector<Var>& pi, int s);

/// Draws beta uniformly over assignments on V(f) and pi uniformly over
/// permutations, runs ppsz_run, and returns the assignment iff it satisfies
/// f. One-sided: unsatisfiable inputs never yield a value.
std::optional<Assignment> ppsz_random(const CnfFormula& f, int s, Rng& rng);

/// Auto repetition policy: ceil(ln(1/delta) * 2^((S_k + epsilon) * n)).
struct AutoReps {
  double epsilon = 0.1;
  double delta = 0.01;
};

struct SolveConfig {
  int s = kDefaultS;
  std::variant<std::uint64_t, AutoReps> repetitions = std::uint64_t{100000};
  std::uint64_t seed = 1;
  std::uint64_t trial_budget = 10'000'000;
  int threads = 0;  // 0 = hardware concurrency
};

struct SatResult {
  Assignment model;
  std::uint64_t trial;        // winning trial index
  std::uint64_t repetitions;  // configured cap
};
struct UnsatResult {
  std::uint64_t trials;
};
using SolveResult = std::variant<SatResult, UnsatResult>;

/// The repetition count Auto mode derives for this formula.
std::uint64_t auto_repetitions(const CnfFormula& f, const AutoReps& reps);

/// Runs up to R independent trials with per-trial RNG streams; trials run in
/// parallel and the lowest successful index wins, so the result is
/// reproducible given the seed. Every returned model is verified against f.
/// Throws BudgetExceeded when the auto count exceeds cfg.trial_budget.
SolveResult solve(const CnfFormula& f, const SolveConfig& cfg);

}  // namespace ppszkit
