#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "ppszkit/cnf.hpp"
#include "ppszkit/oracle.hpp"
#include "ppszkit/rng.hpp"

namespace ppszkit {

enum class Family { Uniform, Planted, UniqueSat };

struct GenSpec {
  int n = 10;
  int m = 40;
  int k = 3;
  Family family = Family::Uniform;
  std::uint64_t seed = 0;
};

/// Exactly m distinct width-k clauses drawn uniformly (variables within a
/// clause distinct). Throws ContractViolation when n < k or m exceeds the
/// number of possible clauses.
CnfFormula gen_uniform(const GenSpec& spec, Rng& rng);

/// Draws a hidden assignment, then redraws any clause it falsifies; the
/// returned formula is satisfied by the returned assignment.
std::pair<CnfFormula, Assignment> gen_planted(const GenSpec& spec, Rng& rng);

/// Rejection-samples planted instances until exactly one satisfying
/// assignment remains (verified by enumeration; n must be within enum_cap).
/// Returns nullopt after max_attempts.
std::optional<std::pair<CnfFormula, Assignment>> gen_unique_sat(
    const GenSpec& spec, Rng& rng, int max_attempts = 1000,
    int enum_cap = kDefaultEnumCap);

const char* family_name(Family f);

}  // namespace ppszkit
