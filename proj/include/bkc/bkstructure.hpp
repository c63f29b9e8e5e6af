#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bkc/geometry.hpp"
#include "bkc/report.hpp"

namespace bkc {

inline constexpr double kCrossTol = 1e-9;
inline constexpr double kNonvanishing = 1e-2;
/// Images of Z must satisfy |x| <= this.
inline constexpr double kZTol = 1e-9;

/// L_k = x^k d/dx + i d/dy; k = 0 gives the Cauchy-Riemann generator.
inline ComplexVectorField generator(int k) {
  if (k < 0) throw std::invalid_argument("generator: k must be >= 0");
  if (k == 0) return {Expr::real(1), Expr::i()};
  if (k == 1) return {Expr::x(), Expr::i()};
  return {pow(Expr::x(), Expr::real(k)), Expr::i()};
}

inline ComplexVectorField conjugate_generator(int k) { return conjugate(generator(k)); }

/// All x-derivatives of order < k vanish on x = 0, checked at sampled y.
inline bool vanishes_to_order(const Expr& a, int k, std::uint64_t seed = 0) {
  const PointList on_z{Sampler::generic(seed).z_points(24)};
  Expr d = a;
  for (int j = 0; j < k; ++j) {
    const Expr restricted = substitute(d, Var::X, Expr::real(0));
    if (!semantically_equal(restricted, Expr::real(0), on_z)) return false;
    d = differentiate(d, Var::X);
  }
  return true;
}

struct LambdaSample {
  Point p;
  cplx lambda;
};

struct ProportionalityVerdict {
  bool holds = true;
  std::vector<LambdaSample> lambda_samples;
  double min_abs_lambda = std::numeric_limits<double>::infinity();
  double max_abs_lambda = 0.0;
  double max_cross = 0.0;
  std::optional<Point> failure_point;
  std::string reason;
  // populated by is_bk_automorphism
  std::optional<bool> maps_z_to_z;
  std::optional<bool> jacobian_nonsingular;
  std::optional<bool> injective_on_samples;

  /// Spread of lambda over samples; zero when lambda is constant.
  double lambda_spread() const {
    double out = 0.0;
    for (const auto& s : lambda_samples) out = std::max(out, std::abs(s.lambda - lambda_samples.front().lambda));
    return out;
  }

  void fail(std::string why, Point p) {
    if (holds) {
      holds = false;
      reason = std::move(why);
      failure_point = p;
    }
  }
};

inline void to_json(json& j, const ProportionalityVerdict& v) {
  json samples = json::array();
  for (const auto& s : v.lambda_samples)
    samples.push_back({{"x", s.p.x}, {"y", s.p.y}, {"re", s.lambda.real()}, {"im", s.lambda.imag()}});
  j = json{{"holds", v.holds},
           {"reason", v.reason},
           {"min_abs_lambda", detail::finite_or_null(v.min_abs_lambda)},
           {"max_abs_lambda", detail::finite_or_null(v.max_abs_lambda)},
           {"max_cross", detail::finite_or_null(v.max_cross)},
           {"lambda_spread", detail::finite_or_null(v.lambda_spread())},
           {"failure_point", v.failure_point ? json{{"x", v.failure_point->x}, {"y", v.failure_point->y}} : json(nullptr)},
           {"lambda_samples", samples}};
  if (v.maps_z_to_z) j["maps_z_to_z"] = *v.maps_z_to_z;
  if (v.jacobian_nonsingular) j["jacobian_nonsingular"] = *v.jacobian_nonsingular;
  if (v.injective_on_samples) j["injective_on_samples"] = *v.injective_on_samples;
}

namespace detail {

/// One sample of the proportionality test: X(p) against Y(p), lambda = X/Y.
inline void proportional_sample(ProportionalityVerdict& v, const CVec& X, const CVec& Y, Point p, double tol,
                                double nv) {
  const double nx = norm(X), ny = norm(Y);
  if (nx == 0.0 && ny == 0.0) {
    v.fail("indeterminate: both fields vanish", p);
    return;
  }
  const double cross = std::abs(X.a * Y.b - Y.a * X.b) / std::max(1.0, nx * ny);
  v.max_cross = std::max(v.max_cross, cross);
  if (!(cross <= tol)) v.fail("cross-determinant " + fmt(cross) + " exceeds tolerance", p);

  const bool use_a = std::abs(Y.a) >= std::abs(Y.b);
  const cplx num = use_a ? X.a : X.b;
  const cplx den = use_a ? Y.a : Y.b;
  const cplx lambda = den == 0.0 ? cplx(std::numeric_limits<double>::infinity()) : num / den;
  const double mag = std::abs(lambda);
  v.lambda_samples.push_back({p, lambda});
  v.min_abs_lambda = std::min(v.min_abs_lambda, mag);
  v.max_abs_lambda = std::max(v.max_abs_lambda, mag);
  if (!(mag >= nv)) v.fail("|lambda| = " + fmt(mag) + " below nonvanishing threshold", p);
  if (!(mag <= 1.0 / nv)) v.fail("|lambda| = " + fmt(mag) + " above 1/threshold (inverse factor vanishes)", p);
}

}  // namespace detail

/// X ~ Y: X = lambda Y with lambda bounded away from 0 and infinity on the samples.
template <class Points>
ProportionalityVerdict is_proportional(const ComplexVectorField& X, const ComplexVectorField& Y, const Points& s,
                                       double tol = kCrossTol, double nv = kNonvanishing) {
  ProportionalityVerdict v;
  for (const Point& p : s.points()) detail::proportional_sample(v, X.at(p), Y.at(p), p, tol, nv);
  return v;
}

/// theta_* L_k ~ L_k, checked pointwise at theta(p), together with sampled
/// diffeomorphism evidence and theta(Z) in Z.
template <class Points>
ProportionalityVerdict is_bk_automorphism(const PlanarMap& m, int k, const Points& s, double tol = kCrossTol,
                                          double nv = kNonvanishing) {
  const ComplexVectorField L = generator(k);
  const Jacobian j = jacobian(m);
  ProportionalityVerdict v;
  v.jacobian_nonsingular = true;
  v.injective_on_samples = true;
  v.maps_z_to_z = true;

  std::vector<Point> pts;
  std::vector<Point> images;
  for (const Point& p : s.points()) {
    const auto J = jacobian_at(j, p);
    const double det = std::abs(J[0][0] * J[1][1] - J[0][1] * J[1][0]);
    const double scale = std::max({1.0, std::abs(J[0][0]), std::abs(J[0][1]), std::abs(J[1][0]), std::abs(J[1][1])});
    if (!(det > 1e-12 * scale * scale)) {
      v.jacobian_nonsingular = false;
      v.fail("singular Jacobian: not a diffeomorphism", p);
      continue;
    }
    const Point q = m(p);
    pts.push_back(p);
    images.push_back(q);
    detail::proportional_sample(v, pushforward_at(j, L, p), L.at(q), p, tol, nv);
  }

  for (std::size_t a = 0; a < images.size(); ++a)
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      const double dp = std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y);
      const double dq = std::hypot(images[a].x - images[b].x, images[a].y - images[b].y);
      if (dp > 1e-9 && dq < 1e-12 * std::max(1.0, dp)) {
        v.injective_on_samples = false;
        v.fail("two samples share an image: not injective", pts[b]);
      }
    }

  for (const Point& z : Sampler::generic().z_points(16)) {
    const Point q = m(z);
    if (!(std::abs(q.x) <= kZTol)) {
      v.maps_z_to_z = false;
      v.fail("image of Z leaves Z", z);
    }
  }
  return v;
}

/// The default sampler for automorphism checks: 64 points, both sides of Z,
/// |x| down to 1e-4.
inline Sampler bk_sampler(std::uint64_t seed = 0) { return Sampler::near_z(seed); }

}  // namespace bkc
