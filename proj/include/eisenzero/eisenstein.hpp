#pragma once

#include <vector>

#include "eisenzero/bernoulli.hpp"
#include "eisenzero/qseries.hpp"

namespace eisenzero {

/// sigma_p(n) for 0 <= n < len (sigma_p(0) is left at 0).
inline std::vector<Integer> divisor_power_sums(unsigned p, int len) {
  std::vector<Integer> sigma(static_cast<std::size_t>(std::max(len, 0)));
  for (int d = 1; d < len; ++d) {
    Integer dp = ipow(Integer(d), p);
    for (int m = d; m < len; m += d) sigma[static_cast<std::size_t>(m)] += dp;
  }
  return sigma;
}

namespace detail {

inline QSeries eisenstein_unchecked(int k, int truncation) {
  if (truncation <= 0) return QSeries::zero(1, truncation);
  Rational factor = Rational(-4 * k) / bernoulli(static_cast<unsigned>(2 * k));
  auto sigma = divisor_power_sums(static_cast<unsigned>(2 * k - 1), truncation);
  std::vector<Rational> c(static_cast<std::size_t>(truncation));
  c[0] = 1;
  for (int n = 1; n < truncation; ++n) c[static_cast<std::size_t>(n)] = factor * Rational(sigma[static_cast<std::size_t>(n)]);
  return QSeries(1, 0, std::move(c), truncation);
}

}  // namespace detail

/// Level-one Eisenstein series of weight 2k,
///   E_{2k} = 1 - (4k / B_{2k}) sum_{n>=1} sigma_{2k-1}(n) q^n,
/// through q^(T-1). Weight 2 is quasi-modular and rejected here.
inline QSeries eisenstein_level1(int k, int truncation) {
  if (k < 2)
    throw Error(ErrorCode::WeightTooSmall, "weight " + std::to_string(2 * k) + " has no level-one Eisenstein series");
  return detail::eisenstein_unchecked(k, truncation);
}

/// The quasi-modular E_2 = 1 - 24 sum sigma_1(n) q^n. Only combinations that
/// cancel its non-modular correction are modular forms.
inline QSeries quasimodular_e2(int truncation) { return detail::eisenstein_unchecked(1, truncation); }

}  // namespace eisenzero
