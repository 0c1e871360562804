#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "ppszkit/analysis.hpp"
#include "ppszkit/error.hpp"

namespace ppszkit {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr int kGkPoints = 8;
constexpr double kGkTable[kGkPoints][3] = {
    // |node|, Gauss weight, Kronrod weight
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

// (t^a - t) / (1 - t), evaluated without cancellation near t = 1 via
// t^a - t = t * expm1((a-1) ln t).
long double integrand(long double t, long double a) {
  if (t <= 0.0L) return 0.0L;
  const long double num = t * expm1l((a - 1.0L) * log1pl(t - 1.0L));
  return num / (1.0L - t);
}

struct Interval {
  long double lo, hi, value, err;
  friend bool operator<(const Interval& x, const Interval& y) {
    return x.err < y.err;  // priority queue: largest error first
  }
};

Interval gk15(long double lo, long double hi, long double a) {
  const long double mid = 0.5L * (lo + hi);
  const long double half = 0.5L * (hi - lo);
  const long double f0 = integrand(mid, a);
  long double gauss = kGkTable[0][1] * f0;
  long double kronrod = kGkTable[0][2] * f0;
  for (int i = 1; i < kGkPoints; ++i) {
    const long double dx = half * static_cast<long double>(kGkTable[i][0]);
    const long double fsum = integrand(mid + dx, a) + integrand(mid - dx, a);
    gauss += kGkTable[i][1] * fsum;
    kronrod += kGkTable[i][2] * fsum;
  }
  gauss *= half;
  kronrod *= half;
  Interval iv{lo, hi, kronrod, fabsl(kronrod - gauss)};
  return iv;
}

}  // namespace

SkValue compute_sk(int k, int digits) {
  if (k < 3) throw ContractViolation("compute_sk: k must be >= 3");
  if (digits < 10 || digits > 13)
    throw ContractViolation("compute_sk: digits must lie in [10, 13]");

  const long double a = 1.0L / static_cast<long double>(k - 1);
  const long double delta = 1e-8L;
  const long double cutoff = 1.0L - delta;
  const long double tol = 0.5L * powl(10.0L, -(digits + 2));

  std::priority_queue<Interval> queue;
  queue.push(gk15(0.0L, cutoff, a));
  long double total = queue.top().value;
  long double errSum = queue.top().err;
  int splits = 0;
  while (errSum > tol && splits < 20000) {
    Interval worst = queue.top();
    queue.pop();
    total -= worst.value;
    errSum -= worst.err;
    const long double mid = 0.5L * (worst.lo + worst.hi);
    for (const Interval& part :
         {gk15(worst.lo, mid, a), gk15(mid, worst.hi, a)}) {
      total += part.value;
      errSum += part.err;
      queue.push(part);
    }
    ++splits;
  }

  // Tail [1-delta, 1]: the integrand extends continuously with limit
  // (k-2)/(k-1) at 1 and is almost linear there; a trapezoid with a
  // curvature bound of order delta^3 is far below any requested tolerance.
  const long double limit = 1.0L - a;
  const long double edge = integrand(cutoff, a);
  const long double tail = 0.5L * delta * (edge + limit);
  const long double tailErr = delta * fabsl(limit - edge) + delta * delta;

  const long double value = total + tail;
  const long double errBound = errSum + tailErr + 1e-18L;
  if (errBound > powl(10.0L, -(digits + 2)))
    throw Error("compute_sk: quadrature failed to reach the requested "
                "precision");

  SkValue out;
  out.k = k;
  out.value = value;
  out.digits = digits;
  // Smallest multiple of 2^-40 at or above value + errBound.
  const long double scaled = ceill((value + errBound) * 1099511627776.0L);
  out.upper_rational =
      Rational(static_cast<unsigned long>(scaled), 1099511627776ul);
  out.upper_rational.canonicalize();
  return out;
}

const SkValue& cached_sk(int k) {
  static std::mutex mu;
  static std::map<int, SkValue> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, compute_sk(k)).first;
  return it->second;
}

}  // namespace ppszkit
