#pragma once

#include <gmpxx.h>

#include <string>

namespace ppszkit {

/// Exact arbitrary-precision rational; every probabilistic quantity in the
/// exact oracles is one of these, so inequality checks are never subject to
/// rounding.
using Rational = mpq_class;

inline double toDouble(const Rational& q) { return q.get_d(); }

/// Decimal rendering with the given number of fractional digits (round to
/// nearest, ties away from zero); exact values print exactly.
std::string toDecimalString(const Rational& q, int digits);

}  // namespace ppszkit
