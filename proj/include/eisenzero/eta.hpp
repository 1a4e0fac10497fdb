#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eisenzero/qseries.hpp"

namespace eisenzero {

struct EtaFactor {
  int scale;     // delta
  int exponent;  // r_delta
};

/// prod_delta eta(delta z)^{r_delta}
struct EtaQuotientSpec {
  std::vector<EtaFactor> factors;

  /// sum delta * r_delta; the expansion starts at q^(this / 24).
  long scaled_order_24() const {
    long s = 0;
    for (const auto& f : factors) s += static_cast<long>(f.scale) * f.exponent;
    return s;
  }

  /// Twice the weight: sum r_delta.
  long twice_weight() const {
    long s = 0;
    for (const auto& f : factors) s += f.exponent;
    return s;
  }

  void validate() const {
    for (const auto& f : factors)
      if (f.scale <= 0) throw Error(ErrorCode::InvalidEtaSpec, "eta scale must be positive");
    if (scaled_order_24() % 24 != 0)
      throw Error(ErrorCode::InvalidEtaSpec,
                  "sum delta*r_delta = " + std::to_string(scaled_order_24()) + " is not divisible by 24");
  }
};

/// prod_{n>=1} (1 - q^n)^r to O(q^len), via the logarithmic-derivative
/// recurrence  n a_n = -r sum_{m=1}^{n} sigma(m) a_{n-m}.
inline std::vector<Rational> euler_product_power(long r, int len) {
  std::vector<Rational> a(static_cast<std::size_t>(std::max(len, 0)));
  if (len <= 0) return a;
  std::vector<long> sigma(static_cast<std::size_t>(len), 0);
  for (int d = 1; d < len; ++d)
    for (int m = d; m < len; m += d) sigma[static_cast<std::size_t>(m)] += d;
  a[0] = 1;
  for (int n = 1; n < len; ++n) {
    Rational acc;
    for (int m = 1; m <= n; ++m) acc += Rational(sigma[static_cast<std::size_t>(m)]) * a[static_cast<std::size_t>(n - m)];
    a[static_cast<std::size_t>(n)] = -r * acc / n;
  }
  return a;
}

/// Expansion of prod eta(delta z)^{r_delta}, exact through q^(T-1), in the
/// width-1 variable q = exp(2 pi i z).
inline QSeries eta_quotient(const EtaQuotientSpec& spec, int truncation) {
  spec.validate();
  int lead = static_cast<int>(spec.scaled_order_24() / 24);
  if (truncation <= lead)
    throw Error(ErrorCode::EmptyTruncation, "truncation does not exceed the eta-quotient order");
  int len = truncation - lead;
  QSeries acc = QSeries::constant(Rational(1), 1, len);
  for (const auto& f : spec.factors) {
    if (f.exponent == 0) continue;
    int inner = (len + f.scale - 1) / f.scale;
    QSeries factor(1, 0, euler_product_power(f.exponent, inner), inner);
    acc = acc * rescale(factor, f.scale).truncated(len);
  }
  std::vector<Rational> coeffs(static_cast<std::size_t>(len));
  for (int n = 0; n < len; ++n) coeffs[static_cast<std::size_t>(n)] = acc.coeff(n);
  return QSeries(1, lead, std::move(coeffs), truncation);
}

}  // namespace eisenzero
