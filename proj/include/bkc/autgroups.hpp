#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bkc/bkstructure.hpp"
#include "bkc/geometry.hpp"
#include "bkc/report.hpp"

namespace bkc {

inline constexpr double kGroupTol = 1e-10;

/// A one-parameter family of automorphisms, additive in t.
struct AutFamily {
  std::string name;
  int k = 1;
  PlanarMap map_of_t;
  /// The same one-parameter group written in half-plane target coordinates.
  PlanarMap target_counterpart;

  PlanarMap at(double t) const { return map_of_t.at_t(t); }
  std::string formula() const { return map_of_t.to_string(); }
};

struct Catalog {
  int k = 1;
  std::vector<AutFamily> families;
  PlanarMap flip;

  const AutFamily& family(const std::string& name) const {
    for (const auto& f : families)
      if (f.name == name) return f;
    throw std::invalid_argument("no family '" + name + "' for k = " + std::to_string(k));
  }
};

namespace detail {

inline PlanarMap parsed_map(const std::string& u, const std::string& v, const std::string& iu, const std::string& iv,
                            int k, Domain domain = {}, Domain inverse_domain = {}) {
  const ParseOptions opts{.k = k, .allow_w = false};
  return PlanarMap{parse_expr(u, opts), parse_expr(v, opts), domain,
                   MapInverse{parse_expr(iu, opts), parse_expr(iv, opts), inverse_domain}}
      .simplified();
}

}  // namespace detail

/// Vertical translations plus scalings (k = 1) or hyperbolic maps (k >= 2),
/// and the order-two flip.
inline Catalog catalog(int k) {
  if (k < 1) throw std::invalid_argument("catalog: k must be >= 1");
  Catalog c;
  c.k = k;
  c.families.push_back({"translations", k, detail::parsed_map("x", "y + t", "x", "y - t", k),
                        k == 1 ? detail::parsed_map("x", "y + t", "x", "y - t", k)
                               : detail::parsed_map("x + t", "y", "x - t", "y", k)});
  if (k == 1) {
    c.families.push_back({"scalings", k, detail::parsed_map("exp(t)*x", "y", "exp(-t)*x", "y", k),
                          detail::parsed_map("x + t", "y", "x - t", "y", k)});
  } else {
    const std::string a = k == 2 ? "exp(-t)*x" : "exp(-t/(k-1))*x";
    const std::string ai = k == 2 ? "exp(t)*x" : "exp(t/(k-1))*x";
    c.families.push_back({"hyperbolic", k, detail::parsed_map(a, "exp(t)*y", ai, "exp(-t)*y", k),
                          detail::parsed_map("exp(t)*x", "exp(t)*y", "exp(-t)*x", "exp(-t)*y", k)});
  }
  c.flip = k % 2 == 0 ? detail::parsed_map("-x", "-y", "-x", "-y", k) : detail::parsed_map("-x", "y", "-x", "y", k);
  return c;
}

/// Identifies the right half-plane carrying L_k with the plane (k = 1) or
/// the upper half-plane (k >= 2) carrying the Cauchy-Riemann structure.
struct HalfPlaneIso {
  int k = 1;
  PlanarMap map;
  Domain target;
  /// map_* L_k, a constant multiple of L_0.
  ComplexVectorField target_field;
  cplx multiple;

  PlanarMap inverse() const { return {map.inverse->u, map.inverse->v, map.inverse->domain, MapInverse{map.u, map.v, map.domain}}; }
};

inline HalfPlaneIso halfplane_iso(int k) {
  if (k < 1) throw std::invalid_argument("halfplane_iso: k must be >= 1");
  HalfPlaneIso iso;
  iso.k = k;
  if (k == 1) {
    iso.target = Domain::plane();
    iso.map = detail::parsed_map("log(x)", "y", "exp(x)", "y", k, Domain::right_half(), iso.target);
    iso.target_field = {Expr::real(1), Expr::i()};
    iso.multiple = 1.0;
  } else {
    iso.target = Domain::upper_half();
    const std::string v = k == 2 ? "1/x" : "1/((k-1)*x^(k-1))";
    const std::string iu = k == 2 ? "1/y" : "((k-1)*y)^(-1/(k-1))";
    iso.map = detail::parsed_map("y", v, iu, "x", k, Domain::right_half(), iso.target);
    iso.target_field = {Expr::i(), Expr::real(-1)};
    iso.multiple = cplx(0, 1);
  }
  if (!relates(iso.map, generator(k), iso.target_field, iso.map.domain.sampler()).equal)
    throw std::logic_error("halfplane_iso: pushforward of L_k is not the expected multiple of L_0");
  return iso;
}

/// inverse o target_aut o map, a map of the right half-plane.
inline PlanarMap conjugate_through(const HalfPlaneIso& iso, const PlanarMap& target_aut,
                                   std::vector<std::string>* warnings = nullptr) {
  const PlanarMap inner = compose(target_aut, iso.map);
  if (warnings) {
    for (const Point& p : iso.map.domain.sampler(0, 32).points()) {
      try {
        if (!iso.target.contains(inner(p))) {
          warnings->push_back("target automorphism moves " + to_string(iso.map(p)) + " out of " + iso.target.name());
          break;
        }
      } catch (const EvalError& err) {
        warnings->push_back(err.what());
        break;
      }
    }
  }
  PlanarMap out = compose(iso.inverse(), inner);
  out.domain = Domain::right_half();
  out.u = simplify(out.u, Assumptions::right_half_plane());
  out.v = simplify(out.v, Assumptions::right_half_plane());
  return out;
}

/// Automorphisms of the target, written in real coordinates with parameter t.
inline PlanarMap target_translation_real() { return parse_map("(x + t, y)"); }
inline PlanarMap target_translation_imag() { return parse_map("(x, y + t)"); }
inline PlanarMap target_dilation() { return parse_map("(exp(t)*x, exp(t)*y)"); }
/// z -> (s + i t) z on the plane.
inline PlanarMap target_complex_scaling(double s, double t) {
  const Expr S = Expr::real(s), T = Expr::real(t);
  return {S * Expr::x() - T * Expr::y(), T * Expr::x() + S * Expr::y(), Domain::plane(), std::nullopt};
}

/// z -> (z cos t - sin t)/(z sin t + cos t) on the upper half-plane.
inline cplx elliptic(cplx z, double t) {
  const double c = std::cos(t), s = std::sin(t);
  return (z * c - s) / (z * s + c);
}

using PointMap = std::function<Point(Point)>;

/// The elliptic family pulled back to the right half-plane, evaluated numerically.
inline PointMap elliptic_pullback(int k, double t) {
  if (k < 2) throw std::invalid_argument("elliptic_pullback: k must be >= 2");
  const HalfPlaneIso iso = halfplane_iso(k);
  const PlanarMap back = iso.inverse();
  return [iso, back, t](Point p) {
    const Point z = iso.map(p);
    const cplx w = elliptic(cplx(z.x, z.y), t);
    return back({w.real(), w.imag()});
  };
}

struct ProbeRow {
  double x = 0.0;
  Point value;
};

struct ExtendabilityResult {
  bool extends = false;
  std::vector<ProbeRow> table;
  std::optional<Point> limit;
  std::string trend;
  std::optional<double> failed_x;
};

inline std::vector<double> default_probe_xs() {
  std::vector<double> xs;
  for (int j = 1; j <= 10; ++j) xs.push_back(std::pow(10.0, -j));
  return xs;
}

/// Behaviour of m(x, y0) as x -> 0+: a Cauchy tail with bounded values
/// extends; a component beyond 1e3 or a non-Cauchy tail diverges.
inline ExtendabilityResult extendability_probe(const PointMap& m, double y0,
                                               const std::vector<double>& xs = default_probe_xs()) {
  ExtendabilityResult r;
  for (double x : xs) {
    try {
      const Point v = m({x, y0});
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw EvalError("non-finite value");
      r.table.push_back({x, v});
    } catch (const std::exception& err) {
      r.failed_x = x;
      r.trend = std::string("evaluation failed: ") + err.what();
      return r;
    }
  }
  if (r.table.empty()) {
    r.trend = "no samples";
    return r;
  }
  const Point last = r.table.back().value;
  const auto direction = [&](double first, double now, const char* axis) {
    return std::string(axis) + (now > first ? " component -> +inf" : " component -> -inf");
  };
  if (std::abs(last.x) > 1e3) {
    r.trend = direction(r.table.front().value.x, last.x, "first");
    return r;
  }
  if (std::abs(last.y) > 1e3) {
    r.trend = direction(r.table.front().value.y, last.y, "second");
    return r;
  }
  const std::size_t n = r.table.size();
  bool cauchy = n >= 4;
  for (std::size_t j = n >= 4 ? n - 3 : n; j < n; ++j) {
    const Point a = r.table[j - 1].value, b = r.table[j].value;
    if (std::hypot(a.x - b.x, a.y - b.y) >= 1e-6) cauchy = false;
  }
  if (!cauchy) {
    r.trend = "tail is not Cauchy (oscillation)";
    if (n >= 4) {
      const auto monotone = [&](auto get) {
        // monotone with steps that do not shrink geometrically
        int sign = 0;
        double prev = 0.0;
        for (std::size_t j = n - 3; j < n; ++j) {
          const double d = get(r.table[j].value) - get(r.table[j - 1].value);
          const int sj = d > 0 ? 1 : d < 0 ? -1 : 0;
          if (sj == 0 || (sign != 0 && sj != sign)) return 0;
          if (sign != 0 && std::abs(d) < 0.5 * std::abs(prev)) return 0;
          sign = sj;
          prev = d;
        }
        return sign;
      };
      if (int sx = monotone([](Point p) { return p.x; }); sx != 0)
        r.trend = std::string("first component -> ") + (sx > 0 ? "+inf" : "-inf") + " (slowly)";
      else if (int sy = monotone([](Point p) { return p.y; }); sy != 0)
        r.trend = std::string("second component -> ") + (sy > 0 ? "+inf" : "-inf") + " (slowly)";
    }
    return r;
  }
  r.extends = true;
  r.limit = last;
  r.trend = "converges";
  return r;
}

inline ExtendabilityResult extendability_probe(const PlanarMap& m, double y0,
                                               const std::vector<double>& xs = default_probe_xs()) {
  return extendability_probe(PointMap([m](Point p) { return m(p); }), y0, xs);
}

inline void to_json(json& j, const ExtendabilityResult& r) {
  json rows = json::array();
  for (const auto& row : r.table) rows.push_back({{"x", row.x}, {"u", row.value.x}, {"v", row.value.y}});
  j = json{{"classification", r.extends ? "extends" : "diverges"},
           {"trend", r.trend},
           {"table", rows},
           {"limit", r.limit ? json{{"u", r.limit->x}, {"v", r.limit->y}} : json(nullptr)},
           {"failed_x", r.failed_x ? json(*r.failed_x) : json(nullptr)}};
}

/// Max scaled discrepancy between two maps over the samples.
template <class Points>
Comparison compare_maps(const PlanarMap& a, const PlanarMap& b, const Points& s, double tol = kGroupTol) {
  const Comparison cu = compare_on(a.u, b.u, s, tol);
  const Comparison cv = compare_on(a.v, b.v, s, tol);
  Comparison out = cu.max_error >= cv.max_error ? cu : cv;
  out.equal = cu.equal && cv.equal;
  return out;
}

namespace detail {

template <class Points>
void measure_maps(ReportBuilder& b, const PlanarMap& lhs, const PlanarMap& rhs, const Points& s,
                  const std::string& what) {
  const Comparison c = compare_maps(lhs, rhs, s);
  b.measure(c.max_error, what, c.worst ? to_string(*c.worst) : "", lhs.to_string(), rhs.to_string());
}

inline std::string params(double s, double t) { return "s=" + fmt(s) + ", t=" + fmt(t); }

}  // namespace detail

inline std::vector<std::pair<double, double>> default_group_params() {
  return {{0.3, -1.1}, {-0.7, 0.4}, {1.5, 0.5}, {-2.0, -0.25}, {0.0, 0.9}};
}

/// fam(s) o fam(t) = fam(s + t) and fam(0) = id.
template <class Points>
VerificationReport group_law_check(const AutFamily& fam, const std::vector<std::pair<double, double>>& ps,
                                   const Points& s) {
  return run_check("group law: " + fam.name + " (k=" + std::to_string(fam.k) + ")", kGroupTol,
                   "one-parameter group " + fam.formula() + " is additive in t", [&](ReportBuilder& b) {
                     detail::measure_maps(b, fam.at(0.0), PlanarMap::identity(), s, "fam(0) = identity");
                     for (auto [a, c] : ps)
                       detail::measure_maps(b, compose(fam.at(a), fam.at(c)), fam.at(a + c), s,
                                            "fam(s) o fam(t) = fam(s+t) at " + detail::params(a, c));
                   });
}

/// k = 1: scalings and translations commute. k >= 2: H_t T_s H_-t = T_{e^t s}.
template <class Points>
VerificationReport relation_check(int k, const std::vector<std::pair<double, double>>& ps, const Points& s) {
  const Catalog c = catalog(k);
  const AutFamily& T = c.family("translations");
  if (k == 1) {
    const AutFamily& S = c.family("scalings");
    return run_check("relations: scalings commute with translations (k=1)", kGroupTol,
                     "positive automorphisms form an abelian group R x R", [&](ReportBuilder& b) {
                       for (auto [a, t] : ps)
                         detail::measure_maps(b, compose(S.at(a), T.at(t)), compose(T.at(t), S.at(a)), s,
                                              "S_s o T_t = T_t o S_s at " + detail::params(a, t));
                     });
  }
  const AutFamily& H = c.family("hyperbolic");
  return run_check("relations: H_t T_s H_-t = T_(e^t s) (k=" + std::to_string(k) + ")", kGroupTol,
                   "positive automorphisms form the ax+b group", [&](ReportBuilder& b) {
                     for (auto [a, t] : ps)
                       detail::measure_maps(b, compose(H.at(t), compose(T.at(a), H.at(-t))), T.at(std::exp(t) * a), s,
                                            "H_t o T_s o H_-t = T_(e^t s) at " + detail::params(a, t));
                   });
}

/// The flip is an involution normalising the positive subgroup and swapping half-planes.
inline VerificationReport semidirect_check(int k, std::uint64_t seed = 0) {
  const Catalog c = catalog(k);
  const Sampler s = Sampler::generic(seed);
  return run_check("semidirect structure (k=" + std::to_string(k) + ")", kGroupTol,
                   "full group is the positive subgroup extended by the order-two flip", [&](ReportBuilder& b) {
                     detail::measure_maps(b, compose(c.flip, c.flip), PlanarMap::identity(), s, "flip^2 = identity");
                     const double sign = k % 2 == 1 ? 1.0 : -1.0;
                     for (double t : {-1.0, 0.4, 2.0}) {
                       const std::string at = "t=" + fmt(t);
                       detail::measure_maps(b, compose(c.flip, compose(c.family("translations").at(t), c.flip)),
                                            c.family("translations").at(sign * t), s,
                                            "flip T_t flip = T_((-1)^(k+1) t) at " + at);
                       const AutFamily& other = c.families[1];
                       detail::measure_maps(b, compose(c.flip, compose(other.at(t), c.flip)), other.at(t), s,
                                            "flip " + other.name + "_t flip = " + other.name + "_t at " + at);
                     }
                     for (const Point& p : Domain::right_half().sampler(seed, 32).points()) {
                       const Point q = c.flip(p);
                       b.check(Domain::left_half().contains(q), "flip maps the right half-plane into the left",
                               to_string(p), to_string(q));
                       const Point back = c.flip(Point{-p.x, p.y});
                       b.check(Domain::right_half().contains(back), "flip maps the left half-plane into the right",
                               to_string(Point{-p.x, p.y}), to_string(back));
                     }
                   });
}

struct FaithfulnessResult {
  bool faithful = true;
  /// A non-identity element fixing every sampled Z point, if found.
  std::optional<std::string> witness;
  double min_displacement = std::numeric_limits<double>::infinity();
};

/// Does the positive group act faithfully on Z? Elements T_s o G_t with
/// (s, t) != (0, 0) are tested on sampled Z points.
inline FaithfulnessResult faithfulness_on_z(int k, std::uint64_t seed = 0) {
  const Catalog c = catalog(k);
  const auto zs = Sampler::generic(seed).z_points(16);
  FaithfulnessResult r;
  const double grid[] = {-1.0, -0.3, 0.0, 0.7, 2.0};
  for (double a : grid)
    for (double t : grid) {
      if (a == 0.0 && t == 0.0) continue;
      const PlanarMap g = compose(c.families[0].at(a), c.families[1].at(t));
      double displacement = 0.0;
      for (const Point& z : zs) {
        const Point q = g(z);
        displacement = std::max(displacement, std::hypot(q.x - z.x, q.y - z.y));
      }
      r.min_displacement = std::min(r.min_displacement, displacement);
      if (displacement < 1e-9 && r.faithful) {
        r.faithful = false;
        r.witness = "T_" + fmt(a) + " o " + c.families[1].name + "_" + fmt(t) + " = " + g.to_string();
      }
    }
  return r;
}

inline std::vector<double> default_family_params() { return {-1.0, -0.3, 0.7, 2.0}; }

/// Every catalog member passes the automorphism criterion.
inline VerificationReport catalog_automorphism_check(int k, std::uint64_t seed = 0) {
  const Catalog c = catalog(k);
  const Sampler s = bk_sampler(seed);
  return run_check("catalog members are automorphisms (k=" + std::to_string(k) + ")", kCrossTol,
                   "automorphisms are the maps with theta_* L_k ~ L_k", [&](ReportBuilder& b) {
                     for (const auto& fam : c.families)
                       for (double t : default_family_params()) {
                         const auto v = is_bk_automorphism(fam.at(t), k, s);
                         b.measure(v.max_cross, fam.name + " cross-determinant at t=" + fmt(t));
                         b.check(v.holds, fam.name + " verdict at t=" + fmt(t),
                                 v.failure_point ? to_string(*v.failure_point) : "", v.reason, "holds");
                       }
                     const auto v = is_bk_automorphism(c.flip, k, s);
                     b.measure(v.max_cross, "flip cross-determinant");
                     b.check(v.holds, "flip verdict", "", v.reason, "holds");
                     const double expected = k % 2 == 0 ? -1.0 : 1.0;
                     for (const auto& ls : v.lambda_samples)
                       b.measure(std::abs(ls.lambda - expected), "flip lambda", to_string(ls.p), fmt(ls.lambda),
                                 fmt(expected));
                   });
}

/// Compositions of catalog members at sample parameters stay automorphisms.
inline VerificationReport closure_check(int k, std::uint64_t seed = 0) {
  const Catalog c = catalog(k);
  const Sampler s = bk_sampler(seed);
  std::vector<std::pair<std::string, PlanarMap>> members{{"flip", c.flip}};
  for (const auto& fam : c.families)
    for (double t : {-0.3, 0.7}) members.push_back({fam.name + "(" + fmt(t) + ")", fam.at(t)});
  return run_check("closure under composition (k=" + std::to_string(k) + ")", kCrossTol,
                   "automorphisms form a group", [&](ReportBuilder& b) {
                     for (const auto& [na, ma] : members)
                       for (const auto& [nb, mb] : members) {
                         const auto v = is_bk_automorphism(compose(ma, mb), k, s);
                         b.check(v.holds, na + " o " + nb, "", v.reason, "holds");
                       }
                   });
}

/// iso o F(t) = G(t) o iso for each family F with target counterpart G.
inline VerificationReport conjugation_consistency_check(int k, std::uint64_t seed = 0) {
  const Catalog c = catalog(k);
  const HalfPlaneIso iso = halfplane_iso(k);
  const Sampler s = Domain::right_half().sampler(seed);
  return run_check("conjugation consistency (k=" + std::to_string(k) + ")", 1e-9,
                   "catalog families correspond to target automorphisms through the half-plane map",
                   [&](ReportBuilder& b) {
                     for (const auto& fam : c.families)
                       for (double t : default_family_params()) {
                         const PlanarMap lhs = compose(iso.map, fam.at(t));
                         const PlanarMap rhs = compose(fam.target_counterpart.at_t(t), iso.map);
                         const Comparison cmp = compare_maps(lhs, rhs, s, 1e-9);
                         b.measure(cmp.max_error, fam.name + " at t=" + fmt(t),
                                   cmp.worst ? to_string(*cmp.worst) : "");
                       }
                   });
}

}  // namespace bkc
