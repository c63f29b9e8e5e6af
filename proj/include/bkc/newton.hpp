#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "bkc/geometry.hpp"

namespace bkc {

class NewtonError : public std::runtime_error {
 public:
  NewtonError(const std::string& what, Point last) : std::runtime_error(what), last_(last) {}
  Point last_iterate() const { return last_; }

 private:
  Point last_;
};

struct NewtonOptions {
  double residual_tol = 1e-12;
  int max_iterations = 50;
};

/// Solves m(p) = q by Newton iteration from `seed`.
inline Point invert_numerically(const PlanarMap& m, Point q, Point seed, NewtonOptions opts = {}) {
  const Jacobian j = jacobian(m);
  Point p = seed;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    Point f;
    try {
      f = m(p);
    } catch (const EvalError& err) {
      throw NewtonError(std::string("evaluation failed: ") + err.what(), p);
    }
    const double rx = f.x - q.x;
    const double ry = f.y - q.y;
    if (std::hypot(rx, ry) < opts.residual_tol) return p;
    if (it == opts.max_iterations) break;

    const auto J = jacobian_at(j, p);
    const double a = J[0][0].real(), b = J[0][1].real(), c = J[1][0].real(), d = J[1][1].real();
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) throw NewtonError("singular Jacobian at " + to_string(p), p);
    p.x -= (d * rx - b * ry) / det;
    p.y -= (a * ry - c * rx) / det;
  }
  throw NewtonError("Newton iteration did not converge; last iterate " + to_string(p), p);
}

}  // namespace bkc
