#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "bkc/eval.hpp"
#include "bkc/expr.hpp"
#include "bkc/sampler.hpp"

namespace bkc {

inline constexpr double kDefaultTol = 1e-10;

/// Evaluation failure at a specific sample point.
class SampleError : public EvalError {
 public:
  SampleError(const std::string& what, Point p) : EvalError(what + " at " + to_string(p)), point_(p) {}
  Point point() const { return point_; }

 private:
  Point point_;
};

inline cplx eval_at_point(const Expr& e, Point p, double t = 0.0) {
  try {
    return eval(e, Env{p.x, p.y, t});
  } catch (const SampleError&) {
    throw;
  } catch (const EvalError& err) {
    throw SampleError(err.what(), p);
  }
}

/// Scaled discrepancy |a - b| / (1 + max(|a|, |b|)).
inline double scaled_error(cplx a, cplx b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

struct Comparison {
  bool equal = true;
  double max_error = 0.0;
  std::optional<Point> worst;
};

/// Randomized-point equality: the project-wide notion of "these two
/// expressions are the same function".
template <class Points>
Comparison compare_on(const Expr& a, const Expr& b, const Points& s, double tol = kDefaultTol, double t = 0.0) {
  Comparison out;
  for (const Point& p : s.points()) {
    const double err = scaled_error(eval_at_point(a, p, t), eval_at_point(b, p, t));
    if (!out.worst || err > out.max_error) {
      out.max_error = err;
      out.worst = p;
    }
  }
  out.equal = out.max_error <= tol;
  return out;
}

template <class Points>
bool semantically_equal(const Expr& a, const Expr& b, const Points& s, double tol = kDefaultTol, double t = 0.0) {
  return compare_on(a, b, s, tol, t).equal;
}

inline bool semantically_equal(const Expr& a, const Expr& b) { return semantically_equal(a, b, Sampler::generic()); }

}  // namespace bkc
