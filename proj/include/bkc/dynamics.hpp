#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkc/autgroups.hpp"
#include "bkc/bkstructure.hpp"
#include "bkc/geometry.hpp"
#include "bkc/report.hpp"

namespace bkc {

struct FlowProblem {
  ComplexVectorField V;
  Point p0;
  double t = 0.0;
  double h = 1e-3;
  Domain domain;
  bool keep_trajectory = false;
};

enum class FlowEvent { None, Boundary, Divergence };

inline std::string to_string(FlowEvent e) {
  switch (e) {
    case FlowEvent::None: return "none";
    case FlowEvent::Boundary: return "boundary";
    case FlowEvent::Divergence: return "divergence";
  }
  return "?";
}

struct TrajectoryPoint {
  double t;
  Point p;
};

struct FlowResult {
  Point end;
  /// Time actually reached; differs from the requested t after an event.
  double t_reached = 0.0;
  FlowEvent event = FlowEvent::None;
  std::string message;
  std::vector<TrajectoryPoint> trajectory;

  bool completed() const { return event == FlowEvent::None; }
};

inline constexpr double kBoundaryMargin = 1e-9;
inline constexpr double kDivergenceBound = 1e12;

/// Classical fixed-step RK4 over [0, t] with ceil(|t|/h) equal steps.
inline FlowResult integrate_flow(const FlowProblem& fp) {
  if (!(fp.h > 0.0)) throw std::invalid_argument("integrate_flow: h must be positive");
  FlowResult r;
  r.end = fp.p0;
  if (fp.keep_trajectory) r.trajectory.push_back({0.0, fp.p0});
  if (fp.t == 0.0) return r;

  const auto n = static_cast<long>(std::ceil(std::abs(fp.t) / fp.h - 1e-12));
  const double dt = fp.t / static_cast<double>(n);
  const auto field = [&](Point p) {
    const Env env{p.x, p.y, 0.0};
    return Point{eval_real(fp.V.a, env), eval_real(fp.V.b, env)};
  };

  Point p = fp.p0;
  for (long step = 0; step < n; ++step) {
    try {
      const Point k1 = field(p);
      const Point k2 = field({p.x + 0.5 * dt * k1.x, p.y + 0.5 * dt * k1.y});
      const Point k3 = field({p.x + 0.5 * dt * k2.x, p.y + 0.5 * dt * k2.y});
      const Point k4 = field({p.x + dt * k3.x, p.y + dt * k3.y});
      p.x += dt / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
      p.y += dt / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
    } catch (const EvalError& err) {
      r.event = FlowEvent::Divergence;
      r.message = err.what();
      return r;
    }
    const double now = dt * static_cast<double>(step + 1);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || std::hypot(p.x, p.y) > kDivergenceBound) {
      r.event = FlowEvent::Divergence;
      r.t_reached = now;
      r.message = "trajectory left every bounded set near t = " + fmt(now);
      return r;
    }
    if (!fp.domain.contains(p, kBoundaryMargin)) {
      r.event = FlowEvent::Boundary;
      r.t_reached = now;
      r.end = p;
      r.message = "trajectory reached the boundary of " + fp.domain.name() + " at t = " + fmt(now);
      return r;
    }
    r.end = p;
    r.t_reached = now;
    if (fp.keep_trajectory) r.trajectory.push_back({now, p});
  }
  r.t_reached = fp.t;
  return r;
}

inline FlowResult integrate_flow(const ComplexVectorField& V, Point p0, double t, double h = 1e-3,
                                 Domain domain = {}) {
  return integrate_flow(FlowProblem{V, p0, t, h, domain, false});
}

/// z0 / (1 - t z0) in complex arithmetic.
inline Point mobius_reference(Point z0, double t) {
  const cplx z(z0.x, z0.y);
  const cplx d = 1.0 - t * z;
  if (std::abs(d) < 1e-14) throw std::invalid_argument("mobius_reference: pole at 1 - t z0 = 0");
  const cplx w = z / d;
  return {w.real(), w.imag()};
}

/// Generator of the Moebius flow: the real field (x^2 - y^2, 2xy).
inline ComplexVectorField mobius_generator() { return parse_field("(x^2 - y^2, 2*x*y)"); }

/// z -> z/(1 - t z) as a one-parameter family in real coordinates.
inline AutFamily mobius_family() {
  const Expr w = parse_expr("x + i*y");
  const Expr image = w / (Expr::real(1) - Expr::t() * w);
  const PlanarMap m{re(image), im(image), Domain::plane(), std::nullopt};
  return {"moebius", 0, m, m};
}

namespace detail {

inline double point_error(Point a, Point b) { return std::max(scaled_error(a.x, b.x), scaled_error(a.y, b.y)); }

}  // namespace detail

/// V is the generator of fam: symbolic derivative at t = 0, a forward
/// difference, and agreement of the RK4 flow with fam(t) for t in {0.1, 0.5, 1}.
template <class Points>
VerificationReport one_parameter_check(const ComplexVectorField& V, const AutFamily& fam, const Points& s,
                                       double h = 1e-3) {
  return run_check("one-parameter group: " + fam.name + " generated by " + "(" + to_string(V.a) + ", " +
                       to_string(V.b) + ")",
                   1e-6, "the family is the flow of its infinitesimal generator", [&](ReportBuilder& b) {
                     const Expr du = at_t(differentiate(fam.map_of_t.u, Var::T), 0.0);
                     const Expr dv = at_t(differentiate(fam.map_of_t.v, Var::T), 0.0);
                     const auto pts = s.points();
                     const PointList list{pts};
                     const Comparison cu = compare_on(du, V.a, list, kDefaultTol);
                     const Comparison cv = compare_on(dv, V.b, list, kDefaultTol);
                     b.check(cu.equal && cv.equal, "d/dt fam(t) at t = 0 equals V",
                             cu.worst ? to_string(*cu.worst) : "", fmt(std::max(cu.max_error, cv.max_error)));
                     const double delta = 1e-6;
                     const PlanarMap step = fam.at(delta);
                     for (const Point& p : pts) {
                       const Point q = step(p);
                       const Point fd{(q.x - p.x) / delta, (q.y - p.y) / delta};
                       const CVec v = V.at(p);
                       const double err = std::max(std::abs(fd.x - v.a), std::abs(fd.y - v.b));
                       b.check(err <= 1e-4 * std::max(1.0, norm(v)), "forward difference of fam at delta = 1e-6",
                               to_string(p), fmt(err));
                     }
                     for (double t : {0.1, 0.5, 1.0}) {
                       const PlanarMap ft = fam.at(t);
                       for (const Point& p : pts) {
                         const FlowResult f = integrate_flow(V, p, t, h);
                         if (!f.completed()) {
                           b.check(false, "flow completes at t=" + fmt(t), to_string(p), f.message);
                           continue;
                         }
                         b.measure(detail::point_error(f.end, ft(p)), "flow vs family at t=" + fmt(t), to_string(p),
                                   to_string(f.end), to_string(ft(p)));
                       }
                     }
                   });
}

/// Seeds on both sides of Z with |z(t)| bounded away from the Moebius pole
/// for |t| <= 1.
inline std::vector<Point> mobius_seeds(int count = 20, std::uint64_t seed = 0) {
  Rng rng(seed ^ 0x6d6f6562ULL);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    const Point p{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    // |1 - t z|^2 is a quadratic in t, minimised at x/|z|^2
    const double r2 = p.x * p.x + p.y * p.y;
    const double t = r2 > 0.0 ? std::clamp(p.x / r2, -1.0, 1.0) : 0.0;
    if (std::abs(1.0 - t * cplx(p.x, p.y)) > 0.2) out.push_back(p);
  }
  return out;
}

/// Endpoint error of the RK4 Moebius flow against the closed form.
inline double mobius_flow_error(Point z0, double t, double h) {
  const FlowResult f = integrate_flow(mobius_generator(), z0, t, h);
  if (!f.completed()) return std::numeric_limits<double>::infinity();
  const Point ref = mobius_reference(z0, t);
  return std::hypot(f.end.x - ref.x, f.end.y - ref.y);
}

inline VerificationReport mobius_flow_check(std::uint64_t seed = 0) {
  return run_check("moebius flow vs closed form", 1e-8, "the field (x^2-y^2, 2xy) generates z -> z/(1-tz)",
                   [&](ReportBuilder& b) {
                     for (const Point& z0 : mobius_seeds(20, seed))
                       b.measure(mobius_flow_error(z0, 0.5, 1e-3), "RK4 (h=1e-3) at t=0.5", to_string(z0));
                   });
}

/// Halving h divides the error by about 16; h is chosen so that truncation,
/// not roundoff, dominates.
inline VerificationReport rk4_order_check(std::uint64_t seed = 0) {
  return run_check("RK4 order", 0.0, "fixed-step RK4 has global error O(h^4)", [&](ReportBuilder& b) {
    for (const Point& z0 : mobius_seeds(5, seed)) {
      const double e1 = mobius_flow_error(z0, 0.5, 0.02);
      const double e2 = mobius_flow_error(z0, 0.5, 0.01);
      const double ratio = e1 / e2;
      b.check(ratio >= 8.0 && ratio <= 32.0, "error ratio for h = 0.02 -> 0.01 in [8, 32]", to_string(z0), fmt(ratio),
              "16");
    }
  });
}

inline VerificationReport flow_group_check(std::uint64_t seed = 0) {
  const ComplexVectorField fields[] = {mobius_generator(), parse_field("(-x, y)"), parse_field("(0, 1)"),
                                       parse_field("(sin(y), x/(1 + x^2))")};
  return run_check("flow group property", 1e-7, "phi_t o phi_s = phi_(s+t)", [&](ReportBuilder& b) {
    for (const auto& V : fields)
      for (const Point& p : mobius_seeds(6, seed))
        for (auto [s, t] : {std::pair{0.2, 0.3}, std::pair{-0.4, 0.25}}) {
          const FlowResult a = integrate_flow(V, p, s);
          const FlowResult c = integrate_flow(V, a.end, t);
          const FlowResult d = integrate_flow(V, p, s + t);
          b.measure(std::hypot(c.end.x - d.end.x, c.end.y - d.end.y), "phi_t(phi_s(p)) vs phi_(s+t)(p)",
                    to_string(p));
        }
  });
}

/// The strip {-pi/2 < y < pi/2}.
inline Domain strip_domain() { return Domain::strip(-std::numbers::pi / 2, std::numbers::pi / 2); }

/// u(x, y) = x e^(iy) as a real map.
inline PlanarMap strip_map() {
  PlanarMap m = parse_map("(x*cos(y), x*sin(y))");
  m.domain = strip_domain();
  // on the half x > 0 the inverse is the principal logarithm
  m.inverse = MapInverse{parse_expr("exp(re(log(x + i*y)))"), parse_expr("im(log(x + i*y))"), Domain::right_half()};
  return m;
}

/// The real field on the strip carried to (x^2 - y^2, 2xy) by u.
inline ComplexVectorField strip_real_field() { return pullback_field(strip_map(), mobius_generator()); }

/// Seeds of the strip whose W-trajectories stay inside for |t| <= 2.
inline std::vector<Point> strip_seeds() {
  return {{0.1, 0.0}, {-0.1, 0.0}, {0.2, 0.6}, {-0.2, 0.6}, {0.2, -0.6},
          {-0.2, -0.6}, {0.3, 0.3}, {-0.3, -0.3}, {0.1, 1.2}, {-0.1, -1.2}};
}

inline VerificationReport strip_example_check() {
  return run_check(
      "strip example: Moebius flow through u", 1e-6,
      "x e^(iy) identifies the strip flow with the Moebius flow", [&](ReportBuilder& b) {
        const PlanarMap u = strip_map();
        const Domain omega = strip_domain();
        Sampler s = omega.sampler(0, 48);
        const PointList right{Domain::right_half().sampler(0, 48).points()};
        const ComplexVectorField L1 = generator(1);

        // (1) pushforwards computed by the engine, compared with z-bar forms
        const ComplexVectorField pushed = pushforward_symbolic(u, L1);
        const ComplexVectorField zbar_dx{parse_expr("x - i*y"), parse_expr("i*(x - i*y)")};
        const bool l1 = compare_on(pushed.a, zbar_dx.a, right).equal && compare_on(pushed.b, zbar_dx.b, right).equal;
        b.check(l1, "u_* L1 = zbar (d/dX + i d/dY)", "", to_string(pushed.a) + ", " + to_string(pushed.b));
        b.check(relates(u, L1, zbar_dx, s).equal, "relates(u, L1, zbar (d/dX + i d/dY)) on the strip");
        b.note("zbar d/dzbar with d/dzbar = (d/dX + i d/dY)/2 is half of u_* L1", "2 zbar d/dzbar", "zbar d/dzbar");

        const ComplexVectorField zbar2{parse_expr("(x - i*y)^2"), parse_expr("i*(x - i*y)^2")};
        const Expr good = parse_expr("x*exp(-i*y)");
        const Expr printed = parse_expr("x*exp(i*y)");
        b.check(relates(u, good * L1, zbar2, s).equal, "relates(u, x e^(-iy) L1, zbar^2 (d/dX + i d/dY))");
        const bool printed_ok = relates(u, printed * L1, zbar2, s).equal;
        b.note("multiplier x e^(iy) gives |z|^2 (d/dX + i d/dY) instead", printed_ok ? "intertwines" : "does not intertwine",
               "zbar^2 (d/dX + i d/dY)");

        // (2) the real field W and its confinement
        const ComplexVectorField W = strip_real_field();
        const ComplexVectorField re_good = real_part(good * L1);
        b.check(compare_on(W.a, re_good.a, s).equal && compare_on(W.b, re_good.b, s).equal,
                "pulled-back Moebius generator = Re(x e^(-iy) L1)", "", to_string(W.a) + ", " + to_string(W.b));
        b.check(relates(u, W, mobius_generator(), s).equal, "relates(u, W, (X^2 - Y^2, 2XY))");
        const ComplexVectorField spec_field = parse_field("(x^2*cos(y), -x*sin(y))");
        const CVec at = pushforward_at(u, spec_field, {0.7, 0.4});
        b.note("(x^2 cos y, -x sin y) = Re(x e^(iy) L1) pushes forward to (|z|^2, 0)",
               fmt(at.a) + ", " + fmt(at.b), "(X^2 - Y^2, 2XY)");

        const FlowResult single = integrate_flow(FlowProblem{W, {0.5, 0.0}, 1.0, 1e-3, omega, false});
        b.check(single.completed(), "flow of W from (0.5, 0) stays in the strip up to t = 1", "", single.message);
        for (const Point& p : strip_seeds())
          for (double t : {2.0, -2.0}) {
            const FlowResult f = integrate_flow(FlowProblem{W, p, t, 1e-3, omega, false});
            b.check(f.completed(), "flow of W stays in the strip for t = " + fmt(t), to_string(p), f.message);
          }
        const FlowResult escape = integrate_flow(FlowProblem{W, {0.5, 0.0}, 3.0, 1e-3, omega, false});
        b.note("flow from (0.5, 0) over t in [0, 3]", to_string(escape.event) + " at t = " + fmt(escape.t_reached),
               "trajectories with |cos(y)/x| <= |t| leave every compact set");

        // (3) flow of W conjugated to the closed-form Moebius flow
        for (const Point& p : strip_seeds())
          for (double t : {-2.0, -1.0, 0.5, 1.0, 2.0}) {
            const FlowResult f = integrate_flow(FlowProblem{W, p, t, 1e-3, omega, false});
            if (!f.completed()) continue;
            const Point lhs = u(f.end);
            const Point rhs = mobius_reference(u(p), t);
            b.measure(detail::point_error(lhs, rhs), "u(phi_t(p)) = moebius_t(u(p)) at t=" + fmt(t), to_string(p),
                      to_string(lhs), to_string(rhs));
          }

        // the time-1 flow map preserves <L1>: finite-difference Jacobian test
        const double hd = 1e-4;
        const auto flow_map = [&](Point p) { return integrate_flow(FlowProblem{W, p, 1.0, 1e-3, omega, false}).end; };
        for (const Point& p : {Point{0.2, 0.6}, Point{-0.2, -0.6}, Point{0.3, 0.3}}) {
          const Point xp = flow_map({p.x + hd, p.y}), xm = flow_map({p.x - hd, p.y});
          const Point yp = flow_map({p.x, p.y + hd}), ym = flow_map({p.x, p.y - hd});
          const double j00 = (xp.x - xm.x) / (2 * hd), j10 = (xp.y - xm.y) / (2 * hd);
          const double j01 = (yp.x - ym.x) / (2 * hd), j11 = (yp.y - ym.y) / (2 * hd);
          const CVec push{j00 * p.x + j01 * cplx(0, 1), j10 * p.x + j11 * cplx(0, 1)};
          const CVec target = L1.at(flow_map(p));
          const double cross = std::abs(push.a * target.b - target.a * push.b) / std::max(1.0, norm(push) * norm(target));
          b.measure(cross, "time-1 flow map pushes L1 to a multiple of L1", to_string(p));
        }
      });
}

}  // namespace bkc
