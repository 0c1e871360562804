#pragma once

// Internal bitmask engine over at most 64 variables. Formulas in the exact
// recursions and PPSZ runs are represented as vectors of (pos, neg) literal
// masks indexed by position in the sorted root variable list. Not installed.

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ppszkit/cnf.hpp"

namespace ppszkit::detail {

inline constexpr int kEngineMaxVars = 64;

inline int popcount(std::uint64_t x) { return std::popcount(x); }
inline std::uint64_t bit(int i) { return 1ull << i; }

/// Maps root variable ids to bit indices (sorted order) and back.
struct VarMap {
  std::vector<Var> vars;  // sorted

  int indexOf(Var v) const;
  Var varOf(int idx) const { return vars[static_cast<std::size_t>(idx)]; }
  int size() const { return static_cast<int>(vars.size()); }
};

struct PackedClause {
  std::uint64_t pos = 0, neg = 0;

  std::uint64_t varsMask() const { return pos | neg; }
  bool empty() const { return (pos | neg) == 0; }
  friend bool operator==(PackedClause a, PackedClause b) {
    return a.pos == b.pos && a.neg == b.neg;
  }
  friend bool operator<(PackedClause a, PackedClause b) {
    return a.pos != b.pos ? a.pos < b.pos : a.neg < b.neg;
  }
};

/// Canonical packed formula: sorted, deduplicated clauses plus the mask of
/// variables still alive. Hashable, usable as a memoization key.
struct PackedFormula {
  std::vector<PackedClause> clauses;
  std::uint64_t alive = 0;

  int n() const { return popcount(alive); }
  bool hasEmptyClause() const {
    return !clauses.empty() && clauses.front().empty();
  }
  void canonicalize();
  PackedFormula restricted(int idx, bool value) const;

  friend bool operator==(const PackedFormula& a, const PackedFormula& b) {
    return a.alive == b.alive && a.clauses == b.clauses;
  }
};

struct PackedFormulaHash {
  std::size_t operator()(const PackedFormula& f) const;
};

VarMap makeVarMap(const CnfFormula& f);
PackedFormula pack(const CnfFormula& f, const VarMap& map);
CnfFormula unpack(const PackedFormula& f, const VarMap& map);

/// Immutable per-root-formula index: clauses plus occurrence lists.
struct RootIndex {
  std::vector<PackedClause> clauses;
  std::uint64_t alive = 0;
  int s = 0;
  // occ[polarity][var index] lists clause ids containing that literal
  // (polarity 1 = positive). Built once; stale entries are filtered against
  // the current image at use.
  std::vector<std::vector<int>> occ[2];

  static RootIndex build(const PackedFormula& f, int s);
};

/// Mutable engine state for one sequence of restrictions: current clause
/// images, an incremental not-implied cache, and the s-implication search.
/// Cheap to copy; the RootIndex is shared.
class RunState {
 public:
  RunState() = default;
  RunState(const RootIndex* root, bool incremental = true);

  std::uint64_t alive() const { return alive_; }
  bool varAlive(int idx) const { return (alive_ & bit(idx)) != 0; }
  bool emptyClauseSeen() const { return empty_seen_; }

  /// Permanently assigns variable idx; updates images and the cache.
  void assign(int idx, bool value);

  /// True iff literal (idx, value) is s-implied by the current formula.
  /// Subset search is seeded at clauses over idx and grown through shared
  /// variables; an empty clause present makes every literal implied.
  bool impliedNow(int idx, bool value);

  enum class FixResult { Quiet, Contradiction, EmptyClause };

  /// Runs the s-implication fixpoint, selecting the lowest implied variable
  /// (positive polarity first) each round; appends forced literals to out.
  FixResult fixToQuiescence(std::vector<std::pair<int, bool>>* out);
  /// Same, with an explicit variable priority order (for confluence tests).
  FixResult fixToQuiescence(std::vector<std::pair<int, bool>>* out,
                            const std::vector<int>& order);

  /// Snapshot of the current formula in canonical form.
  PackedFormula snapshot() const;

 private:
  bool notImpliedCached(int idx, bool value) const {
    return (cache_[static_cast<std::size_t>(idx)] & (value ? 1 : 2)) != 0;
  }
  void cacheNotImplied(int idx, bool value) {
    cache_[static_cast<std::size_t>(idx)] |=
        static_cast<std::uint8_t>(value ? 1 : 2);
  }
  void markDirtyFromTruncated(const std::vector<int>& truncated);
  bool dfsCore(int depth, std::uint64_t unionPos, std::uint64_t unionNeg,
               int assumedVar, bool assumedValue);
  bool tryExtend(int ci, int depth, std::uint64_t unionPos,
                 std::uint64_t unionNeg, int assumedVar, bool assumedValue);
  bool coreUnsat(int count) const;

  const RootIndex* root_ = nullptr;
  std::vector<PackedClause> img_;
  std::vector<std::uint8_t> dead_;
  std::uint64_t alive_ = 0;
  bool empty_seen_ = false;
  bool incremental_ = true;
  std::vector<std::uint8_t> cache_;  // bit0: pos not implied; bit1: neg

  // scratch for the DFS and dirty BFS
  std::vector<int> stackIds_;
  std::vector<PackedClause> stackImgs_;
  std::vector<int> bfsQueue_;
  std::vector<int> bfsDepth_;
  std::vector<std::uint32_t> clauseStamp_;
  std::uint32_t stampGen_ = 0;
};

/// Satisfying assignments of the root formula as value masks over the
/// packed variable order; answers extension queries for restrictions.
struct ModelTable {
  std::vector<std::uint64_t> models;
  int n = 0;

  static ModelTable enumerate(const PackedFormula& f);

  /// Any model agreeing with valueMask on assignedMask?
  bool compatible(std::uint64_t assignedMask, std::uint64_t valueMask) const {
    for (std::uint64_t m : models)
      if (((m ^ valueMask) & assignedMask) == 0) return true;
    return false;
  }
  std::size_t countCompatible(std::uint64_t assignedMask,
                              std::uint64_t valueMask) const {
    std::size_t c = 0;
    for (std::uint64_t m : models)
      if (((m ^ valueMask) & assignedMask) == 0) ++c;
    return c;
  }
};

}  // namespace ppszkit::detail
