#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ppszkit {

/// Variables are positive integer ids, stable across restriction.
using Var = int;

/// A literal: a variable or its complement. Encoded DIMACS style, +v / -v.
class Lit {
 public:
  Lit() = default;
  Lit(Var v, bool positive) : code_(positive ? v : -v) { assert(v > 0); }

  static Lit fromDimacs(int code) {
    assert(code != 0);
    Lit l;
    l.code_ = code;
    return l;
  }

  Var var() const { return std::abs(code_); }
  bool positive() const { return code_ > 0; }
  int dimacs() const { return code_; }
  Lit complement() const { return fromDimacs(-code_); }

  std::string str() const { return std::to_string(code_); }

  friend bool operator==(Lit a, Lit b) { return a.code_ == b.code_; }
  /// Order: by variable, positive literal before negative.
  friend bool operator<(Lit a, Lit b) { return a.key() < b.key(); }

 private:
  int key() const { return 2 * var() + (positive() ? 0 : 1); }
  int code_ = 0;
};

/// A partial assignment, viewable both as a map Var -> bool and as the set
/// of literals it satisfies. Bindings are kept sorted by variable.
class Assignment {
 public:
  Assignment() = default;

  static Assignment fromLiterals(std::span<const Lit> lits) {
    Assignment a;
    for (Lit l : lits) a.set(l);
    return a;
  }

  void set(Var v, bool value) {
    auto it = lowerBound(v);
    if (it != bind_.end() && it->first == v) {
      it->second = value;
    } else {
      bind_.insert(it, {v, value});
    }
  }
  void set(Lit l) { set(l.var(), l.positive()); }

  bool binds(Var v) const {
    auto it = lowerBound(v);
    return it != bind_.end() && it->first == v;
  }

  std::optional<bool> value(Var v) const {
    auto it = lowerBound(v);
    if (it != bind_.end() && it->first == v) return it->second;
    return std::nullopt;
  }

  /// True iff this assignment makes l true (unbound variables make it false).
  bool satisfies(Lit l) const {
    auto b = value(l.var());
    return b.has_value() && *b == l.positive();
  }

  std::size_t size() const { return bind_.size(); }
  bool empty() const { return bind_.empty(); }

  const std::vector<std::pair<Var, bool>>& bindings() const { return bind_; }

  /// The set of satisfied literals, sorted by variable.
  std::vector<Lit> literals() const {
    std::vector<Lit> out;
    out.reserve(bind_.size());
    for (auto [v, b] : bind_) out.emplace_back(v, b);
    return out;
  }

  /// Restriction of the assignment to the given variables.
  Assignment restrictedTo(std::span<const Var> vars) const {
    Assignment a;
    for (Var v : vars) {
      auto b = value(v);
      if (b) a.set(v, *b);
    }
    return a;
  }

  bool totalOn(std::span<const Var> vars) const {
    for (Var v : vars)
      if (!binds(v)) return false;
    return true;
  }

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.bind_ == b.bind_;
  }
  friend bool operator<(const Assignment& a, const Assignment& b) {
    return a.bind_ < b.bind_;
  }

 private:
  std::vector<std::pair<Var, bool>>::const_iterator lowerBound(Var v) const {
    return std::lower_bound(bind_.begin(), bind_.end(), v,
                            [](const auto& p, Var w) { return p.first < w; });
  }
  std::vector<std::pair<Var, bool>>::iterator lowerBound(Var v) {
    return std::lower_bound(bind_.begin(), bind_.end(), v,
                            [](const auto& p, Var w) { return p.first < w; });
  }

  std::vector<std::pair<Var, bool>> bind_;
};

}  // namespace ppszkit
