#pragma once

#include <vector>

namespace bhchaos {

/// J_0(x) ... J_{n_max}(x) for x >= 0 by Miller's downward recurrence,
/// normalized with J_0 + 2 sum_k J_{2k} = 1.
std::vector<double> bessel_jn_sequence(double x, int n_max);

/// J_0(x) ... J_M(x) where M is the last order with |J_M(x)| >= cutoff; every
/// higher order lies below the cutoff.
std::vector<double> bessel_jn_until(double x, double cutoff);

}  // namespace bhchaos
