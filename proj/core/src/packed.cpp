#include "packed.hpp"

#include <algorithm>
#include <cassert>

#include "ppszkit/error.hpp"

namespace ppszkit::detail {

int VarMap::indexOf(Var v) const {
  auto it = std::lower_bound(vars.begin(), vars.end(), v);
  assert(it != vars.end() && *it == v);
  return static_cast<int>(it - vars.begin());
}

void PackedFormula::canonicalize() {
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
}

PackedFormula PackedFormula::restricted(int idx, bool value) const {
  const std::uint64_t b = bit(idx);
  PackedFormula out;
  out.alive = alive & ~b;
  out.clauses.reserve(clauses.size());
  for (PackedClause c : clauses) {
    if ((value ? c.pos : c.neg) & b) continue;  // satisfied
    c.pos &= ~b;
    c.neg &= ~b;
    out.clauses.push_back(c);
  }
  out.canonicalize();
  return out;
}

std::size_t PackedFormulaHash::operator()(const PackedFormula& f) const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  mix(f.alive);
  for (const PackedClause& c : f.clauses) {
    mix(c.pos);
    mix(c.neg);
  }
  return static_cast<std::size_t>(h);
}

VarMap makeVarMap(const CnfFormula& f) {
  if (f.n() > kEngineMaxVars)
    throw CapExceeded("formula has " + std::to_string(f.n()) +
                      " variables; the engine caps at " +
                      std::to_string(kEngineMaxVars));
  return VarMap{f.vars()};
}

PackedFormula pack(const CnfFormula& f, const VarMap& map) {
  PackedFormula out;
  out.alive = map.size() == 64 ? ~0ull : (1ull << map.size()) - 1;
  out.clauses.reserve(f.clauseCount());
  for (const Clause& c : f.clauses()) {
    PackedClause pc;
    for (Lit l : c.literals()) {
      const std::uint64_t b = bit(map.indexOf(l.var()));
      (l.positive() ? pc.pos : pc.neg) |= b;
    }
    out.clauses.push_back(pc);
  }
  out.canonicalize();
  return out;
}

CnfFormula unpack(const PackedFormula& f, const VarMap& map) {
  std::vector<Var> vars;
  for (int i = 0; i < map.size(); ++i)
    if (f.alive & bit(i)) vars.push_back(map.varOf(i));
  std::vector<Clause> clauses;
  clauses.reserve(f.clauses.size());
  for (const PackedClause& pc : f.clauses) {
    std::vector<Lit> lits;
    for (std::uint64_t m = pc.pos; m; m &= m - 1)
      lits.emplace_back(map.varOf(std::countr_zero(m)), true);
    for (std::uint64_t m = pc.neg; m; m &= m - 1)
      lits.emplace_back(map.varOf(std::countr_zero(m)), false);
    clauses.emplace_back(std::move(lits));
  }
  return CnfFormula(std::move(vars), std::move(clauses));
}

RootIndex RootIndex::build(const PackedFormula& f, int s) {
  RootIndex idx;
  idx.clauses = f.clauses;
  idx.alive = f.alive;
  idx.s = s;
  const int n = f.alive == 0 ? 0 : 64 - std::countl_zero(f.alive);
  idx.occ[0].resize(static_cast<std::size_t>(n));
  idx.occ[1].resize(static_cast<std::size_t>(n));
  for (std::size_t ci = 0; ci < idx.clauses.size(); ++ci) {
    const PackedClause& c = idx.clauses[ci];
    for (std::uint64_t m = c.pos; m; m &= m - 1)
      idx.occ[1][static_cast<std::size_t>(std::countr_zero(m))].push_back(
          static_cast<int>(ci));
    for (std::uint64_t m = c.neg; m; m &= m - 1)
      idx.occ[0][static_cast<std::size_t>(std::countr_zero(m))].push_back(
          static_cast<int>(ci));
  }
  return idx;
}

RunState::RunState(const RootIndex* root, bool incremental)
    : root_(root),
      img_(root->clauses),
      dead_(root->clauses.size(), 0),
      alive_(root->alive),
      incremental_(incremental),
      cache_(root->occ[0].size(), 0),
      clauseStamp_(root->clauses.size(), 0) {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i].empty()) empty_seen_ = true;
}

void RunState::assign(int idx, bool value) {
  assert(varAlive(idx));
  const std::uint64_t b = bit(idx);
  alive_ &= ~b;
  std::vector<int> truncated;
  const auto& satOcc = root_->occ[value ? 1 : 0];
  const auto& cutOcc = root_->occ[value ? 0 : 1];
  if (static_cast<std::size_t>(idx) < satOcc.size())
    for (int ci : satOcc[static_cast<std::size_t>(idx)]) {
      if (dead_[static_cast<std::size_t>(ci)]) continue;
      PackedClause& c = img_[static_cast<std::size_t>(ci)];
      if ((value ? c.pos : c.neg) & b) dead_[static_cast<std::size_t>(ci)] = 1;
    }
  if (static_cast<std::size_t>(idx) < cutOcc.size())
    for (int ci : cutOcc[static_cast<std::size_t>(idx)]) {
      if (dead_[static_cast<std::size_t>(ci)]) continue;
      PackedClause& c = img_[static_cast<std::size_t>(ci)];
      const std::uint64_t other = value ? c.neg : c.pos;
      if (other & b) {
        (value ? c.neg : c.pos) &= ~b;
        if (c.empty()) empty_seen_ = true;
        truncated.push_back(ci);
      }
    }
  if (incremental_) {
    markDirtyFromTruncated(truncated);
  } else {
    std::fill(cache_.begin(), cache_.end(), 0);
  }
}

void RunState::markDirtyFromTruncated(const std::vector<int>& truncated) {
  // A literal can become implied only through a core that contains a
  // truncated clause; cores have at most s clauses and are connected in the
  // variable-incidence graph, so only variables of clauses within s-1
  // clause-hops of a truncated clause need to be retested.
  if (truncated.empty()) return;
  ++stampGen_;
  bfsQueue_.clear();
  bfsDepth_.clear();
  std::uint64_t dirtyVars = 0;
  for (int ci : truncated) {
    clauseStamp_[static_cast<std::size_t>(ci)] = stampGen_;
    bfsQueue_.push_back(ci);
    bfsDepth_.push_back(0);
  }
  for (std::size_t qi = 0; qi < bfsQueue_.size(); ++qi) {
    const int ci = bfsQueue_[qi];
    const int depth = bfsDepth_[qi];
    if (dead_[static_cast<std::size_t>(ci)]) continue;
    const PackedClause& c = img_[static_cast<std::size_t>(ci)];
    const std::uint64_t vs = c.varsMask() & alive_;
    dirtyVars |= vs;
    if (depth >= root_->s - 1) continue;
    for (std::uint64_t m = vs; m; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      for (int pol = 0; pol < 2; ++pol)
        for (int cj : root_->occ[pol][v]) {
          if (clauseStamp_[static_cast<std::size_t>(cj)] == stampGen_)
            continue;
          clauseStamp_[static_cast<std::size_t>(cj)] = stampGen_;
          if (dead_[static_cast<std::size_t>(cj)]) continue;
          bfsQueue_.push_back(cj);
          bfsDepth_.push_back(depth + 1);
        }
    }
  }
  for (std::uint64_t m = dirtyVars; m; m &= m - 1)
    cache_[static_cast<std::size_t>(std::countr_zero(m))] = 0;
}

bool RunState::coreUnsat(int count) const {
  std::uint64_t u = 0;
  for (int i = 0; i < count; ++i) u |= stackImgs_[static_cast<std::size_t>(i)].varsMask();
  if (popcount(u) > 26)
    throw CapExceeded("s-implication subset spans too many variables");
  // Every assignment of the union variables must falsify some clause.
  for (std::uint64_t sub = u;; sub = (sub - 1) & u) {
    bool sat = false;
    for (int i = 0; i < count; ++i) {
      const PackedClause& c = stackImgs_[static_cast<std::size_t>(i)];
      if ((c.pos & sub) != 0 || (c.neg & (u & ~sub)) != 0) {
        sat = true;
        break;
      }
    }
    if (sat) {
      if (sub == 0) break;
      continue;
    }
    return false;  // this assignment satisfies every clause in the subset
  }
  return true;
}

bool RunState::tryExtend(int ci, int depth, std::uint64_t unionPos,
                         std::uint64_t unionNeg, int assumedVar,
                         bool assumedValue) {
  if (dead_[static_cast<std::size_t>(ci)]) return false;
  for (int i = 0; i < depth; ++i)
    if (stackIds_[static_cast<std::size_t>(i)] == ci) return false;
  PackedClause c = img_[static_cast<std::size_t>(ci)];
  const std::uint64_t ab = bit(assumedVar);
  // Clauses holding the assumed literal are satisfied under the assumption
  // and useless for a refutation; clauses holding its complement shrink.
  if ((assumedValue ? c.pos : c.neg) & ab) return false;
  (assumedValue ? c.neg : c.pos) &= ~ab;
  stackIds_[static_cast<std::size_t>(depth)] = ci;
  stackImgs_[static_cast<std::size_t>(depth)] = c;
  return dfsCore(depth + 1, unionPos | c.pos, unionNeg | c.neg, assumedVar,
                 assumedValue);
}

bool RunState::dfsCore(int depth, std::uint64_t unionPos,
                       std::uint64_t unionNeg, int assumedVar,
                       bool assumedValue) {
  const std::uint64_t ublkPos = unionPos & ~unionNeg;
  const std::uint64_t ublkNeg = unionNeg & ~unionPos;
  std::uint64_t ublk = ublkPos | ublkNeg;

  if (ublk == 0) {
    // Every literal is blocked; this subset can be a minimal core.
    if (coreUnsat(depth)) return true;
    if (depth >= root_->s) return false;
    // A larger core may pass through this satisfiable subset. Its clauses
    // are connected to the current ones, so expand by any clause sharing a
    // variable with the union.
    const std::uint64_t uvars = (unionPos | unionNeg) & alive_;
    for (std::uint64_t m = uvars; m; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      for (int pol = 0; pol < 2; ++pol)
        for (int ci : root_->occ[pol][v]) {
          const PackedClause& cand = img_[static_cast<std::size_t>(ci)];
          if (((pol ? cand.pos : cand.neg) & bit(static_cast<int>(v))) == 0)
            continue;  // stale occurrence
          if (tryExtend(ci, depth, unionPos, unionNeg, assumedVar,
                        assumedValue))
            return true;
        }
    }
    return false;
  }
  if (depth >= root_->s) return false;

  // Branch on one unblocked literal; any minimal core extending the current
  // subset must contain a clause with its complement. Pick the literal with
  // the fewest candidate clauses.
  int w = -1;
  bool wantPositive = false;
  std::size_t bestOcc = SIZE_MAX;
  for (std::uint64_t m = ublk; m; m &= m - 1) {
    const int v = std::countr_zero(m);
    const bool wp = (ublkNeg & bit(v)) != 0;  // complement polarity
    const std::size_t occ = root_->occ[wp ? 1 : 0][static_cast<std::size_t>(v)].size();
    if (occ < bestOcc) {
      bestOcc = occ;
      w = v;
      wantPositive = wp;
    }
  }
  for (int ci : root_->occ[wantPositive ? 1 : 0][static_cast<std::size_t>(w)]) {
    const PackedClause& cand = img_[static_cast<std::size_t>(ci)];
    if (((wantPositive ? cand.pos : cand.neg) & bit(w)) == 0) continue;
    if (tryExtend(ci, depth, unionPos, unionNeg, assumedVar, assumedValue))
      return true;
  }
  return false;
}

bool RunState::impliedNow(int idx, bool value) {
  if (root_->s <= 0) return false;
  if (empty_seen_) return true;  // the empty clause implies everything
  if (!varAlive(idx)) return false;

  if (stackIds_.size() < static_cast<std::size_t>(root_->s)) {
    stackIds_.resize(static_cast<std::size_t>(root_->s));
    stackImgs_.resize(static_cast<std::size_t>(root_->s));
  }

  // Assume the complement (idx -> !value); seeds are clauses containing the
  // literal itself, which the assumption truncates.
  const std::uint64_t b = bit(idx);
  for (int ci : root_->occ[value ? 1 : 0][static_cast<std::size_t>(idx)]) {
    if (dead_[static_cast<std::size_t>(ci)]) continue;
    PackedClause c = img_[static_cast<std::size_t>(ci)];
    if (((value ? c.pos : c.neg) & b) == 0) continue;  // stale occurrence
    (value ? c.pos : c.neg) &= ~b;
    if (c.empty()) return true;  // unit clause forces the literal
    stackIds_[0] = ci;
    stackImgs_[0] = c;
    if (dfsCore(1, c.pos, c.neg, idx, !value)) return true;
  }
  return false;
}

RunState::FixResult RunState::fixToQuiescence(
    std::vector<std::pair<int, bool>>* out) {
  static const std::vector<int> kNoOrder;
  return fixToQuiescence(out, kNoOrder);
}

RunState::FixResult RunState::fixToQuiescence(
    std::vector<std::pair<int, bool>>* out, const std::vector<int>& order) {
  if (root_->s <= 0) return FixResult::Quiet;
  for (;;) {
    if (empty_seen_) return FixResult::EmptyClause;
    int pickVar = -1;
    bool pickVal = false;
    if (order.empty()) {
      for (std::uint64_t m = alive_; m; m &= m - 1) {
        const int v = std::countr_zero(m);
        const bool posImp = !notImpliedCached(v, true) && impliedNow(v, true);
        if (!posImp) cacheNotImplied(v, true);
        const bool negImp = !notImpliedCached(v, false) && impliedNow(v, false);
        if (!negImp) cacheNotImplied(v, false);
        if (posImp && negImp) return FixResult::Contradiction;
        if (posImp || negImp) {
          pickVar = v;
          pickVal = posImp;
          break;
        }
      }
    } else {
      for (int v : order) {
        if (!varAlive(v)) continue;
        const bool posImp = !notImpliedCached(v, true) && impliedNow(v, true);
        if (!posImp) cacheNotImplied(v, true);
        const bool negImp = !notImpliedCached(v, false) && impliedNow(v, false);
        if (!negImp) cacheNotImplied(v, false);
        if (posImp && negImp) return FixResult::Contradiction;
        if (posImp || negImp) {
          pickVar = v;
          pickVal = posImp;
          break;
        }
      }
    }
    if (pickVar < 0) return FixResult::Quiet;
    assign(pickVar, pickVal);
    if (out) out->emplace_back(pickVar, pickVal);
  }
}

PackedFormula RunState::snapshot() const {
  PackedFormula f;
  f.alive = alive_;
  f.clauses.reserve(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (!dead_[i]) f.clauses.push_back(img_[i]);
  f.canonicalize();
  return f;
}

ModelTable ModelTable::enumerate(const PackedFormula& f) {
  ModelTable t;
  t.n = f.alive == 0 ? 0 : 64 - std::countl_zero(f.alive);
  // Only called with a contiguous alive mask (root formulas).
  assert(f.alive == (t.n == 64 ? ~0ull : (1ull << t.n) - 1));
  const std::uint64_t total = t.n == 0 ? 1 : (1ull << t.n);
  for (std::uint64_t value = 0; value < total; ++value) {
    bool ok = true;
    for (const PackedClause& c : f.clauses) {
      if ((c.pos & value) == 0 && (c.neg & ~value & f.alive) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) t.models.push_back(value);
  }
  return t;
}

}  // namespace ppszkit::detail
