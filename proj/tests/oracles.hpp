#pragma once

// Independent reference computations for the test suites. Nothing here
// goes through the simplifier, the pushforward engine or the integrator.

#include <cmath>
#include <complex>
#include <numbers>

#include "bkc/eval.hpp"
#include "bkc/sampler.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline cplx central_difference(const bkc::Expr& e, bkc::Var v, bkc::Point p, double h, double t = 0.0) {
  bkc::Env lo{p.x, p.y, t}, hi{p.x, p.y, t};
  switch (v) {
    case bkc::Var::X: lo.x -= h; hi.x += h; break;
    case bkc::Var::Y: lo.y -= h; hi.y += h; break;
    case bkc::Var::T: lo.t -= h; hi.t += h; break;
  }
  return (bkc::eval(e, hi) - bkc::eval(e, lo)) / (2.0 * h);
}

/// z/(1 - t z) in real arithmetic: (x - t|z|^2, y) / |1 - t z|^2.
inline bkc::Point mobius(bkc::Point z, double t) {
  const double d = (1 - t * z.x) * (1 - t * z.x) + t * z.y * t * z.y;
  return {(z.x - t * (z.x * z.x + z.y * z.y)) / d, z.y / d};
}

/// Trapezoid rule for the integral of e^(2 n x - x^2) over the line times the
/// integral of e^(-y^2); exact closed form is pi e^(n^2).
inline double gaussian_exp_integral(double n) {
  const double h = 1e-3, lo = n - 30.0, hi = n + 30.0;
  double sum = 0.0;
  for (double x = lo; x <= hi; x += h) sum += std::exp(2 * n * x - x * x);
  return sum * h * std::sqrt(std::numbers::pi);
}

}  // namespace oracle
