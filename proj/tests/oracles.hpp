#pragma once

// Independent reference computations used by several test binaries. They are
// deliberately naive: brute-force divisor sums and factor-by-factor products.

#include <cstdlib>
#include <utility>
#include <vector>

#include "eisenzero/rational.hpp"

namespace oracle {

using eisenzero::Integer;
using eisenzero::Rational;

inline Integer sigma(int n, unsigned p) {
  Integer s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) s += eisenzero::ipow(Integer(d), p);
  return s;
}

/// Coefficients 0..len-1 of prod_{delta, n >= 1} (1 - q^{delta n})^{r_delta}.
inline std::vector<Rational> eta_product(const std::vector<std::pair<int, int>>& factors, int len) {
  std::vector<Rational> acc(static_cast<std::size_t>(len));
  acc[0] = 1;
  for (auto [delta, r] : factors) {
    for (int n = 1; delta * n < len; ++n) {
      int step = delta * n;
      for (int rep = 0; rep < std::abs(r); ++rep) {
        if (r > 0) {
          for (int i = len - 1; i >= step; --i) acc[i] -= acc[i - step];
        } else {
          for (int i = step; i < len; ++i) acc[i] += acc[i - step];
        }
      }
    }
  }
  return acc;
}

/// Coefficient of q^n in E_{2k}(m z), using the closed form -4k/B_{2k} with the
/// Bernoulli value supplied by the caller.
inline Rational eisenstein_coeff(int n, int m, unsigned two_k, const Rational& factor) {
  if (n == 0) return 1;
  if (n % m != 0) return 0;
  return factor * Rational(sigma(n / m, two_k - 1));
}

}  // namespace oracle
