#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bkc {

/// Nodes and weights for the integral of f(x) e^(-x^2) over the line.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on the orthonormal Hermite recurrence, started from the
/// usual asymptotic guesses for the largest roots.
inline GaussHermite gauss_hermite(int n) {
  if (n < 1 || n > 400) throw std::invalid_argument("gauss_hermite: n must be in [1, 400]");
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  GaussHermite g;
  g.nodes.assign(static_cast<std::size_t>(n), 0.0);
  g.weights.assign(static_cast<std::size_t>(n), 0.0);
  auto& x = g.nodes;
  auto& w = g.weights;
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    else if (i == 1) z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2) z = 1.86 * z - 0.86 * x[0];
    else if (i == 3) z = 1.91 * z - 0.91 * x[1];
    else z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];

    double pp = 0.0;
    int it = 0;
    for (; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 3e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (it == 100) throw std::runtime_error("gauss_hermite: Newton iteration did not converge");
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
  return g;
}

}  // namespace bkc
