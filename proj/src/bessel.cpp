#include "bhchaos/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace bhchaos {

std::vector<double> bessel_jn_sequence(double x, int n_max) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("Bessel argument must be >= 0");
  if (n_max < 0) throw std::invalid_argument("Bessel order must be >= 0");
  std::vector<double> out(n_max + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  constexpr double big = 1e250;
  constexpr double small = 1e-250;
  const int top = std::max(n_max, static_cast<int>(std::ceil(x)));
  int start = top + 20 + static_cast<int>(std::sqrt(160.0 * top));
  start += start % 2;  // even, so the sum rule picks up every even order

  double next = 0.0;  // j_{k+1}
  double cur = 1e-300;  // j_k, arbitrary seed at k = start
  double sum = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * cur - next;  // j_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 <= n_max) out[k - 1] = cur;
    if (k <= n_max) out[k] = next;
    if ((k - 1) % 2 == 0 && k - 1 > 0) sum += 2.0 * cur;
    if (std::abs(cur) > big) {
      cur *= small;
      next *= small;
      sum *= small;
      for (int n = k - 1; n <= n_max && n <= start; ++n) out[n] *= small;
    }
  }
  sum += cur;  // j_0
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> bessel_jn_until(double x, double cutoff) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
  int n_max = static_cast<int>(std::ceil(x + 10.0 * std::cbrt(x) + 30.0));
  for (;;) {
    auto seq = bessel_jn_sequence(x, n_max);
    int last = n_max;
    while (last > 0 && std::abs(seq[last]) < cutoff) --last;
    // Beyond the turning point n > x the sequence decreases monotonically.
    if (last < n_max && n_max > x) {
      seq.resize(last + 1);
      return seq;
    }
    n_max *= 2;
  }
}

}  // namespace bhchaos
