#pragma once

// Shared machinery for repeated PPSZ trials over one formula. Not installed.

#include <memory>

#include "packed.hpp"
#include "ppszkit/cnf.hpp"

namespace ppszkit::detail {

/// Per-formula preparation for PPSZ runs: packed root, occurrence index, and
/// the deterministic root fixpoint (identical in every run, so cached).
struct PpszPlan {
  VarMap map;
  PackedFormula packedRoot;
  RootIndex root;
  RunState afterRootFix;
  std::vector<std::pair<int, bool>> rootForced;
  RunState::FixResult rootFixResult = RunState::FixResult::Quiet;
  int s = 0;

  PpszPlan(const PpszPlan&) = delete;  // afterRootFix points into root
  PpszPlan() = default;
};

std::unique_ptr<PpszPlan> buildPlan(const CnfFormula& f, int s);

/// One trace-less PPSZ run. scratch is reset from plan.afterRootFix.
/// Returns true iff the run completed with every clause satisfied; then
/// *valueOut holds the total assignment's value bits. guessedOut (optional)
/// receives the mask of guessed variables, meaningful for completed runs.
bool runTrial(const PpszPlan& plan, RunState& scratch, std::uint64_t betaMask,
              const std::vector<int>& perm, std::uint64_t* valueOut,
              std::uint64_t* guessedOut = nullptr);

}  // namespace ppszkit::detail
