#pragma once

#include <mutex>
#include <vector>

#include "eisenzero/rational.hpp"

namespace eisenzero {

namespace detail {

// Akiyama-Tanigawa triangle; yields B_1 = +1/2, flipped below.
inline Rational bernoulli_uncached(unsigned n) {
  std::vector<Rational> row(n + 1);
  for (unsigned m = 0; m <= n; ++m) {
    row[m] = Rational(1, m + 1);
    for (unsigned j = m; j >= 1; --j) row[j - 1] = j * (row[j - 1] - row[j]);
  }
  return row[0];
}

}  // namespace detail

/// Bernoulli number B_n with B_1 = -1/2, so that
/// sum_{j=0}^{n} C(n+1, j) B_j = 0 for all n >= 1. Memoized; thread-safe.
inline Rational bernoulli(unsigned n) {
  static std::mutex mutex;
  static std::vector<Rational> memo;
  if (n == 1) return Rational(-1, 2);
  if (n > 1 && n % 2 == 1) return Rational(0);
  std::lock_guard<std::mutex> lock(mutex);
  if (memo.size() <= n) memo.resize(n + 1, Rational(-1));
  // -1 is never an even-index Bernoulli number, so it marks "not computed".
  if (memo[n] == -1) memo[n] = detail::bernoulli_uncached(n);
  return memo[n];
}

}  // namespace eisenzero
