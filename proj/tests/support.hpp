#pragma once

#include "isde/data_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace isde::testing {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration.
inline std::pair<std::vector<double>, std::vector<double>>
gauss_legendre(int n)
{
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1)
        p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::fabs(step) < 1e-16)
        break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return { x, w };
}

// Integral of f over [a, b] split at the sorted breakpoints.
template<class F>
double
integrate_piecewise(F&& f, std::vector<double> breaks, int nodes)
{
  const auto [x, w] = gauss_legendre(nodes);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (!(b > a))
      continue;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int j = 0; j < nodes; ++j)
      total += half * w[j] * f(mid + half * x[j]);
  }
  return total;
}

inline DataMatrix
uniform_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DataMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      out(i, j) = u(rng);
  return out;
}

} // namespace isde::testing
