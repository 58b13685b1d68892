#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "numrad/numrad.hpp"

namespace testing {

using numrad::Complex;
using numrad::ComplexMatrix;

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

inline double rel_diff(double a, double b) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

// Half-plane membership Re(e^{i theta} z) <= lambda, with slack scaled to |z|.
inline bool inside(const numrad::SupportPoint& sp, Complex z, double slack) {
  return (std::polar(1.0, sp.theta) * z).real() <= sp.lambda + slack;
}

}  // namespace testing
