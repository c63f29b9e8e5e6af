#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bkc/build.hpp"
#include "bkc/diff.hpp"
#include "bkc/eval.hpp"
#include "bkc/expr.hpp"
#include "bkc/parse.hpp"
#include "bkc/print.hpp"
#include "bkc/sampler.hpp"
#include "bkc/semantic.hpp"
#include "bkc/simplify.hpp"

namespace bkc {

enum class Region { Plane, RightHalf, LeftHalf, Strip, UpperHalf };

/// Coarse named regions of the plane.
struct Domain {
  Region region = Region::Plane;
  double y_lo = 0.0;
  double y_hi = 0.0;

  static Domain plane() { return {}; }
  static Domain right_half() { return {Region::RightHalf}; }
  static Domain left_half() { return {Region::LeftHalf}; }
  static Domain upper_half() { return {Region::UpperHalf}; }
  static Domain strip(double lo, double hi) { return {Region::Strip, lo, hi}; }

  /// Open-set membership, shrunk by `margin`.
  bool contains(Point p, double margin = 0.0) const {
    switch (region) {
      case Region::Plane: return std::isfinite(p.x) && std::isfinite(p.y);
      case Region::RightHalf: return p.x > margin;
      case Region::LeftHalf: return p.x < -margin;
      case Region::UpperHalf: return p.y > margin;
      case Region::Strip: return p.y > y_lo + margin && p.y < y_hi - margin;
    }
    return false;
  }

  Assumptions assumptions() const {
    switch (region) {
      case Region::RightHalf: return Assumptions::right_half_plane();
      case Region::UpperHalf: return Assumptions::upper_half_plane();
      default: return {};
    }
  }

  /// A generic sampler confined to the region (and to |x|, |y| <= 3).
  Sampler sampler(std::uint64_t seed = 0, int count = 64) const {
    Sampler s = Sampler::generic(seed);
    s.count = count;
    switch (region) {
      case Region::Plane: break;
      case Region::RightHalf:
        s = Sampler::right_half(0.1, 3.0, seed);
        s.count = count;
        break;
      case Region::LeftHalf:
        s.x_max = -0.1;
        break;
      case Region::UpperHalf:
        s.y_min = 0.1;
        s.z_exclusion = 0.0;
        break;
      case Region::Strip: {
        const double pad = 0.05 * (y_hi - y_lo);
        s.y_min = y_lo + pad;
        s.y_max = y_hi - pad;
        break;
      }
    }
    return s;
  }

  std::string name() const {
    switch (region) {
      case Region::Plane: return "plane";
      case Region::RightHalf: return "right-half-plane";
      case Region::LeftHalf: return "left-half-plane";
      case Region::UpperHalf: return "upper-half-plane";
      case Region::Strip: return "strip(" + detail::format_real(y_lo) + "," + detail::format_real(y_hi) + ")";
    }
    return "?";
  }

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// A complex tangent vector at a point: a d/dx + b d/dy.
struct CVec {
  cplx a;
  cplx b;
};

inline double norm(const CVec& v) { return std::hypot(std::abs(v.a), std::abs(v.b)); }

/// a d/dx + b d/dy with complex coefficient functions of (x, y).
struct ComplexVectorField {
  Expr a;
  Expr b;

  CVec at(Point p, double t = 0.0) const { return {eval_at_point(a, p, t), eval_at_point(b, p, t)}; }

  /// The derivation f -> a f_x + b f_y.
  Expr apply(const Expr& f) const {
    return mk::add(mk::mul(a, differentiate(f, Var::X)), mk::mul(b, differentiate(f, Var::Y)));
  }

  ComplexVectorField simplified(Assumptions as = {}) const { return {simplify(a, as), simplify(b, as)}; }
};

inline ComplexVectorField operator*(const Expr& f, const ComplexVectorField& X) { return {f * X.a, f * X.b}; }

/// (re a, re b): the real part of a complex field.
inline ComplexVectorField real_part(const ComplexVectorField& X) { return {simplify(re(X.a)), simplify(re(X.b))}; }

inline ComplexVectorField conjugate(const ComplexVectorField& X) { return {simplify(conj(X.a)), simplify(conj(X.b))}; }

/// Inverse data carried by a map: components and the region they act on.
struct MapInverse {
  Expr u;
  Expr v;
  Domain domain;
};

/// (x, y) -> (u(x, y), v(x, y)), real-valued on its domain. May depend on a
/// free parameter t.
struct PlanarMap {
  Expr u;
  Expr v;
  Domain domain;
  std::optional<MapInverse> inverse;

  static PlanarMap identity() { return {Expr::x(), Expr::y(), Domain::plane(), MapInverse{Expr::x(), Expr::y(), {}}}; }

  Point operator()(Point p, double t = 0.0) const {
    try {
      const Env env{p.x, p.y, t};
      return {eval_real(u, env), eval_real(v, env)};
    } catch (const SampleError&) {
      throw;
    } catch (const EvalError& err) {
      throw SampleError(err.what(), p);
    }
  }

  PlanarMap at_t(double t) const {
    PlanarMap m{bkc::at_t(u, t), bkc::at_t(v, t), domain, std::nullopt};
    if (inverse) m.inverse = MapInverse{bkc::at_t(inverse->u, t), bkc::at_t(inverse->v, t), inverse->domain};
    return m;
  }

  PlanarMap simplified() const {
    const Assumptions as = domain.assumptions();
    PlanarMap m{simplify(u, as), simplify(v, as), domain, inverse};
    if (inverse) {
      const Assumptions ias = inverse->domain.assumptions();
      m.inverse = MapInverse{simplify(inverse->u, ias), simplify(inverse->v, ias), inverse->domain};
    }
    return m;
  }

  std::string to_string() const { return "(" + bkc::to_string(u) + ", " + bkc::to_string(v) + ")"; }
};

/// Parses the CLI pair syntax "(e1, e2)" used for both maps and fields.
inline std::pair<Expr, Expr> parse_pair(const std::string& text, ParseOptions opts = {}) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close <= open)
    throw ParseError("expected \"(expr, expr)\"", 0);
  if (text.find_first_not_of(" \t", close + 1) != std::string::npos) throw ParseError("trailing text after ')'", close + 1);
  const std::string body = text.substr(open + 1, close - open - 1);
  int depth = 0;
  std::size_t split = std::string::npos;
  for (std::size_t k = 0; k < body.size(); ++k) {
    if (body[k] == '(') ++depth;
    if (body[k] == ')') --depth;
    if (body[k] == ',' && depth == 0) {
      if (split != std::string::npos) throw ParseError("expected exactly two components", open + 1 + k);
      split = k;
    }
  }
  if (split == std::string::npos) throw ParseError("expected two comma-separated components", open + 1);
  return {parse_expr(body.substr(0, split), opts), parse_expr(body.substr(split + 1), opts)};
}

inline ComplexVectorField parse_field(const std::string& text, ParseOptions opts = {}) {
  auto [a, b] = parse_pair(text, opts);
  return {a, b};
}

inline PlanarMap parse_map(const std::string& text, ParseOptions opts = {}) {
  auto [u, v] = parse_pair(text, opts);
  return {u, v, Domain::plane(), std::nullopt};
}

/// "x0,y0"
inline Point parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("point must look like x0,y0", 0);
  try {
    std::size_t used = 0;
    const double x = std::stod(text.substr(0, comma), &used);
    const double y = std::stod(text.substr(comma + 1), &used);
    return {x, y};
  } catch (const std::logic_error&) {
    throw ParseError("point must look like x0,y0", 0);
  }
}

/// [[du/dx, du/dy], [dv/dx, dv/dy]]
using Jacobian = std::array<std::array<Expr, 2>, 2>;

inline Jacobian jacobian(const PlanarMap& m) {
  return {{{simplify(differentiate(m.u, Var::X)), simplify(differentiate(m.u, Var::Y))},
           {simplify(differentiate(m.v, Var::X)), simplify(differentiate(m.v, Var::Y))}}};
}

inline std::array<std::array<cplx, 2>, 2> jacobian_at(const Jacobian& j, Point p, double t = 0.0) {
  return {{{eval_at_point(j[0][0], p, t), eval_at_point(j[0][1], p, t)},
           {eval_at_point(j[1][0], p, t), eval_at_point(j[1][1], p, t)}}};
}

inline CVec pushforward_at(const Jacobian& j, const ComplexVectorField& X, Point p, double t = 0.0) {
  const auto J = jacobian_at(j, p, t);
  const CVec x = X.at(p, t);
  return {J[0][0] * x.a + J[0][1] * x.b, J[1][0] * x.a + J[1][1] * x.b};
}

/// D m(p) X(p), the value of m_* X at m(p).
inline CVec pushforward_at(const PlanarMap& m, const ComplexVectorField& X, Point p, double t = 0.0) {
  if (!m.domain.contains(p)) throw SampleError("point outside " + m.domain.name(), p);
  m(p, t);
  return pushforward_at(jacobian(m), X, p, t);
}

/// Max over samples of the scaled discrepancy between D m(p) X(p) and Y(m(p)).
template <class Points>
Comparison relates(const PlanarMap& m, const ComplexVectorField& X, const ComplexVectorField& Y, const Points& s,
                   double tol = 1e-10) {
  const Jacobian j = jacobian(m);
  Comparison out;
  for (const Point& p : s.points()) {
    const CVec pushed = pushforward_at(j, X, p);
    const CVec target = Y.at(m(p));
    const double err = std::max(scaled_error(pushed.a, target.a), scaled_error(pushed.b, target.b));
    if (!out.worst || err > out.max_error) {
      out.max_error = err;
      out.worst = p;
    }
  }
  out.equal = out.max_error <= tol;
  return out;
}

/// Symbolic D m X - Y o m, simplified under the map's domain assumptions.
inline ComplexVectorField pushforward_residual(const PlanarMap& m, const ComplexVectorField& X,
                                               const ComplexVectorField& Y) {
  const Jacobian j = jacobian(m);
  const Substitution along{m.u, m.v, std::nullopt};
  const Expr ra = j[0][0] * X.a + j[0][1] * X.b - substitute(Y.a, along);
  const Expr rb = j[1][0] * X.a + j[1][1] * X.b - substitute(Y.b, along);
  const Assumptions as = m.domain.assumptions();
  return {simplify(ra, as), simplify(rb, as)};
}

/// m_* X as a field in target coordinates; needs the attached inverse.
inline ComplexVectorField pushforward_symbolic(const PlanarMap& m, const ComplexVectorField& X) {
  if (!m.inverse) throw std::invalid_argument("pushforward_symbolic: map has no attached inverse");
  const Jacobian j = jacobian(m);
  const Substitution back{m.inverse->u, m.inverse->v, std::nullopt};
  const Assumptions as = m.inverse->domain.assumptions();
  return {simplify(substitute(j[0][0] * X.a + j[0][1] * X.b, back), as),
          simplify(substitute(j[1][0] * X.a + j[1][1] * X.b, back), as)};
}

/// The field W with m_* W = Y, i.e. W = (D m)^-1 (Y o m), by Cramer's rule.
inline ComplexVectorField pullback_field(const PlanarMap& m, const ComplexVectorField& Y) {
  const Jacobian j = jacobian(m);
  const Substitution along{m.u, m.v, std::nullopt};
  const Expr ya = substitute(Y.a, along);
  const Expr yb = substitute(Y.b, along);
  const Expr det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  const Assumptions as = m.domain.assumptions();
  return {simplify((j[1][1] * ya - j[0][1] * yb) / det, as), simplify((j[0][0] * yb - j[1][0] * ya) / det, as)};
}

/// [X, Y] = (X(a_Y) - Y(a_X)) d/dx + (X(b_Y) - Y(b_X)) d/dy
inline ComplexVectorField lie_bracket(const ComplexVectorField& X, const ComplexVectorField& Y) {
  return {simplify(X.apply(Y.a) - Y.apply(X.a)), simplify(X.apply(Y.b) - Y.apply(X.b))};
}

/// m2 o m1 by substitution. When `warnings` is given, sampled points of
/// m1's domain whose image leaves m2's domain are reported there.
inline PlanarMap compose(const PlanarMap& m2, const PlanarMap& m1, std::vector<std::string>* warnings = nullptr) {
  const Substitution along{m1.u, m1.v, std::nullopt};
  PlanarMap out{substitute(m2.u, along), substitute(m2.v, along), m1.domain, std::nullopt};
  if (m1.inverse && m2.inverse) {
    const Substitution back{m2.inverse->u, m2.inverse->v, std::nullopt};
    out.inverse = MapInverse{substitute(m1.inverse->u, back), substitute(m1.inverse->v, back), m2.inverse->domain};
  }
  if (warnings && m2.domain.region != Region::Plane) {
    for (const Point& p : m1.domain.sampler(0, 32).points()) {
      try {
        if (!m2.domain.contains(m1(p))) {
          warnings->push_back("image of " + to_string(p) + " leaves " + m2.domain.name());
          break;
        }
      } catch (const EvalError& err) {
        warnings->push_back(err.what());
        break;
      }
    }
  }
  const Assumptions as = m1.domain.assumptions();
  out.u = simplify(out.u, as);
  out.v = simplify(out.v, as);
  return out;
}

}  // namespace bkc
