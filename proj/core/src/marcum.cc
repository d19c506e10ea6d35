#include "jamlab/marcum.h"

#include <cmath>

namespace jamlab {

double marcum_q1(double a, double b) {
  if (b <= 0.0) return 1.0;
  const double x = 0.5 * a * a;
  const double y = 0.5 * b * b;
  if (x == 0.0) return std::exp(-y);
  if (x > 650.0 || y > 650.0) {
    // Large-argument regime: R is approximately normal(sqrt(a^2+1), 1).
    return 0.5 * std::erfc((b - std::sqrt(a * a + 1.0)) / std::sqrt(2.0));
  }
  // Q1 = sum_n Pois(n; x) * P(Pois(y) <= n). Both factors advance by a
  // multiplicative recurrence; the remaining contribution is bounded by the
  // unaccumulated Poisson(x) tail since the inner CDF is <= 1.
  double pois = std::exp(-x);
  double inner_term = std::exp(-y);
  double inner_cdf = inner_term;
  double q = pois * inner_cdf;
  double tail = 1.0 - pois;
  for (int n = 1; n < 100000 && tail > 1e-17; ++n) {
    pois *= x / n;
    inner_term *= y / n;
    inner_cdf += inner_term;
    q += pois * inner_cdf;
    tail -= pois;
  }
  return q < 1.0 ? q : 1.0;
}

}  // namespace jamlab
