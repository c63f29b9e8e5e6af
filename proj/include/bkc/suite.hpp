#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkc/autgroups.hpp"
#include "bkc/bkstructure.hpp"
#include "bkc/dynamics.hpp"
#include "bkc/geometry.hpp"
#include "bkc/holospaces.hpp"
#include "bkc/random_expr.hpp"
#include "bkc/report.hpp"

namespace bkc {

namespace suite {

inline std::string tag(int k) { return " (k=" + std::to_string(k) + ")"; }

inline Sampler property_points(std::uint64_t seed) {
  Sampler s = Sampler::right_half(0.1, 3.0, seed);
  s.count = 16;
  return s;
}

inline VerificationReport print_parse_roundtrip(std::uint64_t seed) {
  return run_check("01 symexpr: print/parse round trip", 1e-10, "expression core", [&](ReportBuilder& b) {
    const Sampler s = property_points(seed);
    RandomExpr gen(seed);
    for (int n = 0; n < 200; ++n) {
      const Expr e = gen.next_evaluable(s);
      const std::string text = to_string(e);
      const Comparison c = compare_on(parse_expr(text), e, s, 1e-10);
      b.measure(c.max_error, "parse(print(e)) = e", text);
    }
  });
}

inline VerificationReport simplify_preserves(std::uint64_t seed) {
  return run_check("01 symexpr: simplify preserves values", 1e-9, "expression core", [&](ReportBuilder& b) {
    const Sampler s = property_points(seed);
    RandomExpr gen(seed + 1);
    for (int n = 0; n < 200; ++n) {
      const Expr e = gen.next_evaluable(s);
      b.measure(compare_on(simplify(e), e, s, 1e-9).max_error, "simplify(e) = e", to_string(e));
      b.measure(compare_on(simplify(e, Assumptions::right_half_plane()), e, s, 1e-9).max_error,
                "simplify(e) = e assuming x > 0", to_string(e));
    }
  });
}

inline VerificationReport derivative_vs_difference(std::uint64_t seed) {
  return run_check("01 symexpr: derivatives match central differences", 1e-5, "expression core",
                   [&](ReportBuilder& b) {
                     Sampler s = Sampler::right_half(0.3, 2.5, seed);
                     s.count = 4;
                     RandomExpr gen(seed + 2);
                     const double h = 1e-6;
                     for (int n = 0; n < 100; ++n) {
                       const Expr e = gen.next_evaluable(property_points(seed));
                       for (Var v : {Var::X, Var::Y}) {
                         const Expr d = differentiate(e, v);
                         for (const Point& p : s.points()) {
                           const Point lo = v == Var::X ? Point{p.x - h, p.y} : Point{p.x, p.y - h};
                           const Point hi = v == Var::X ? Point{p.x + h, p.y} : Point{p.x, p.y + h};
                           const cplx fd = (eval_at_point(e, hi) - eval_at_point(e, lo)) / (2 * h);
                           const cplx exact = eval_at_point(d, p);
                           b.measure(std::abs(exact - fd) / (1.0 + std::abs(exact)),
                                     std::string("d/d") + var_name(v) + " " + to_string(e), to_string(p));
                         }
                       }
                     }
                   });
}

inline VerificationReport pushforward_example(std::uint64_t seed) {
  return run_check("02 pushforward: (exp(y)*x, y) relates d/dy to x d/dx + d/dy", 1e-10,
                   "a diffeomorphism preserving Z but not the standard module", [&](ReportBuilder& b) {
                     const PlanarMap theta = parse_map("(exp(y)*x, y)");
                     const ComplexVectorField X = parse_field("(0, 1)"), Y = parse_field("(x, 1)");
                     const ComplexVectorField res = pushforward_residual(theta, X, Y);
                     b.check(res.a.is_zero() && res.b.is_zero(), "symbolic residual simplifies to 0", "",
                             "(" + to_string(res.a) + ", " + to_string(res.b) + ")", "(0, 0)");
                     b.measure(relates(theta, X, Y, Sampler::generic(seed)).max_error, "pointwise pushforward");
                     for (int k : {1, 2}) {
                       const auto v = is_bk_automorphism(theta, k, bk_sampler(seed));
                       b.check(!v.holds, "not an automorphism" + tag(k), "", v.reason, "fails");
                     }
                     const Point p{0.5, 0.2};
                     const CVec pushed = pushforward_at(theta, generator(1), p);
                     const CVec target = generator(1).at(theta(p));
                     b.measure(std::abs(pushed.a / target.a - cplx(1, 1)), "first component ratio is 1+i",
                               to_string(p), fmt(pushed.a / target.a), "1+1i");
                     b.measure(std::abs(pushed.b / target.b - 1.0), "second component ratio is 1", to_string(p),
                               fmt(pushed.b / target.b), "1");
                   });
}

inline VerificationReport generator_check(int k, std::uint64_t seed) {
  return run_check("03 generator and vanishing order" + tag(k), 1e-10,
                   "L_k spans the module of fields tangent to Z to order k", [&](ReportBuilder& b) {
                     const ComplexVectorField L = generator(k);
                     b.check(vanishes_to_order(L.a, k, seed), "x-coefficient vanishes to order k");
                     b.check(!vanishes_to_order(L.a, k + 1, seed), "x-coefficient does not vanish to order k+1");
                     const HalfPlaneIso iso = halfplane_iso(k);
                     b.measure(relates(iso.map, L, iso.target_field, iso.map.domain.sampler(seed)).max_error,
                               "half-plane map pushes L_k to a multiple of the Cauchy-Riemann field",
                               iso.map.to_string());
                   });
}

inline VerificationReport counterexample_check(int k, std::uint64_t seed) {
  return run_check("05 counterexamples fail the criterion" + tag(k), 0.0,
                   "maps outside the automorphism group", [&](ReportBuilder& b) {
                     for (const char* text : {"(exp(y)*x, y)", "(x, y + x)"}) {
                       const auto v = is_bk_automorphism(parse_map(text), k, bk_sampler(seed));
                       b.check(!v.holds, std::string(text) + " rejected", "", v.reason, "fails");
                     }
                   });
}

inline VerificationReport conjugation_check(int k, std::uint64_t seed) {
  return run_check("07 conjugation through the half-plane map" + tag(k), 1e-10,
                   "positive automorphisms come from target automorphisms", [&](ReportBuilder& b) {
                     const HalfPlaneIso iso = halfplane_iso(k);
                     const Catalog c = catalog(k);
                     const Sampler s = Domain::right_half().sampler(seed);
                     std::vector<std::string> warnings;
                     const PlanarMap from_real = conjugate_through(iso, target_translation_real(), &warnings);
                     const PlanarMap from_other =
                         conjugate_through(iso, k == 1 ? target_translation_imag() : target_dilation(), &warnings);
                     for (const auto& w : warnings) b.check(false, "target automorphism stays in the target", "", w);
                     const AutFamily& first = k == 1 ? c.family("scalings") : c.family("translations");
                     const AutFamily& second = k == 1 ? c.family("translations") : c.family("hyperbolic");
                     for (double t : default_family_params()) {
                       const Comparison a = compare_maps(from_real.at_t(t), first.at(t), s, 1e-10);
                       b.measure(a.max_error, "real translation -> " + first.name + " at t=" + fmt(t),
                                 a.worst ? to_string(*a.worst) : "", from_real.at_t(t).to_string(),
                                 first.at(t).to_string());
                       const Comparison d = compare_maps(from_other.at_t(t), second.at(t), s, 1e-10);
                       b.measure(d.max_error,
                                 std::string(k == 1 ? "imaginary translation" : "dilation") + " -> " + second.name +
                                     " at t=" + fmt(t),
                                 d.worst ? to_string(*d.worst) : "", from_other.at_t(t).to_string(),
                                 second.at(t).to_string());
                     }
                     if (k == 1) {
                       const double t = 0.7;
                       const double gap =
                           compare_maps(from_real.at_t(t), parse_map("(x + 0.7, y)"), s, 1e-10).max_error;
                       b.note("conjugating z -> z+s gives (e^s x, y), not a translation in x", fmt(gap),
                              "(exp(s)*x, y)");
                     }
                   });
}

inline VerificationReport elliptic_probe_check(int k) {
  if (k < 2)
    return skipped_report("08 extendability: elliptic pullback" + tag(k), "elliptic maps do not extend across Z",
                          "the upper half-plane target only arises for k >= 2");
  return run_check("08 extendability: elliptic pullback" + tag(k), 1e-3, "elliptic maps do not extend across Z",
                   [&](ReportBuilder& b) {
                     const double t = std::numbers::pi / 4;
                     for (double y0 : {0.0, 1.0}) {
                       const auto r = extendability_probe(elliptic_pullback(k, t), y0);
                       const std::string at = "y0=" + fmt(y0);
                       b.check(!r.extends, "classified as diverging", at, r.trend, "diverges");
                       bool seen = false;
                       for (const auto& row : r.table) {
                         if (row.x != 1e-6) continue;
                         seen = true;
                         b.measure(std::abs(row.value.y - 1.0 / std::tan(t)), "second component near cot(t) at x=1e-6",
                                   at, fmt(row.value.y), fmt(1.0 / std::tan(t)));
                         b.check(row.value.x > 1e3, "first component beyond 1e3 at x=1e-6", at, fmt(row.value.x),
                                 "> 1000");
                       }
                       b.check(seen, "probe reached x=1e-6", at);
                     }
                   });
}

inline VerificationReport extension_probe_check(int k) {
  return run_check("08 extendability: catalog and scaling pullbacks" + tag(k), 0.0,
                   "catalog members extend across Z, rotations of the target do not", [&](ReportBuilder& b) {
                     const Catalog c = catalog(k);
                     for (const auto& fam : c.families)
                       for (double t : {-0.3, 0.7}) {
                         const auto r = extendability_probe(fam.at(t), 0.5);
                         b.check(r.extends, fam.name + " at t=" + fmt(t) + " extends", "y0=0.5", r.trend, "converges");
                       }
                     if (k != 1) return;
                     const HalfPlaneIso iso = halfplane_iso(1);
                     for (double t : {0.5, 1.0}) {
                       const PlanarMap m = conjugate_through(iso, target_complex_scaling(std::cos(t), std::sin(t)));
                       const auto r = extendability_probe(m, 0.5);
                       b.check(!r.extends, "pullback of z -> e^(it) z at t=" + fmt(t) + " diverges", "y0=0.5", r.trend,
                               "diverges");
                     }
                     const auto sc = extendability_probe(conjugate_through(iso, target_complex_scaling(1.0, 1.0)), 0.0);
                     b.check(!sc.extends, "pullback of z -> (1+i) z diverges", "y0=0", sc.trend, "diverges");
                     b.check(sc.trend.rfind("second component -> -inf", 0) == 0, "second component decreases without bound",
                             "y0=0", sc.trend, "second component -> -inf");
                     const auto id = extendability_probe(
                         conjugate_through(iso, target_complex_scaling(1.0, 0.0)), 0.5);
                     b.check(id.extends, "pullback of the identity extends", "y0=0.5", id.trend, "converges");
                   });
}

inline ComplexVectorField family_generator(const AutFamily& fam, int k) {
  if (fam.name == "translations") return parse_field("(0, 1)");
  if (fam.name == "scalings") return parse_field("(x, 0)");
  return parse_field("(-x/" + std::to_string(k - 1) + ", y)");
}

inline VerificationReport faithfulness_check(int k, std::uint64_t seed) {
  return run_check("11 action on Z" + tag(k), 0.0,
                   k == 1 ? "scalings fix Z pointwise" : "the positive group acts faithfully on Z",
                   [&](ReportBuilder& b) {
                     const FaithfulnessResult r = faithfulness_on_z(k, seed);
                     if (k == 1)
                       b.check(!r.faithful, "a non-identity element fixes Z", "", r.witness.value_or("none found"),
                               "scaling fixing Z");
                     else
                       b.check(r.faithful, "no non-identity element fixes Z", "", r.witness.value_or("none"),
                               "none");
                     b.note("smallest displacement of a non-identity element on Z", fmt(r.min_displacement));
                   });
}

inline VerificationReport residual_check() {
  return run_check("13 b-holomorphy: residuals", 1e-10, "functions annihilated by L_1", [&](ReportBuilder& b) {
    Grid plane;
    plane.x_min = -2, plane.x_max = 2, plane.x_step = 0.25, plane.y_min = -3, plane.y_max = 3, plane.y_step = 0.25;
    for (const char* name : {"u", "u^2", "u^3"}) {
      const auto r = residual_sup(bholo(name).expr, 1, plane);
      b.check(r.residual.is_zero(), std::string(name) + " residual is symbolically 0", "", to_string(r.residual), "0");
      b.measure(r.sup, std::string(name) + " residual on grid");
    }
    Grid poles = plane;
    poles.x_min = -0.9, poles.x_max = 0.9, poles.x_step = 0.1;
    const auto h = residual_sup(bholo("h(u), h(w) = w/(1-w)").expr, 1, poles);
    b.measure(h.sup, "h(u) residual on |x| < 1");
    const auto poly = bk_residual(parse_expr("(x*exp(i*y))^3 - 2*(x*exp(i*y)) + 5"), 1);
    b.check(poly.is_zero(), "polynomial in u has residual 0", "", to_string(poly), "0");
    const auto x = residual_sup(Expr::x(), 1, plane);
    b.check(std::abs(x.sup - 2.0) < 1e-12, "f = x is not b-holomorphic (sup = max |x|)", "", fmt(x.sup), "2");
  });
}

inline VerificationReport flat_check() {
  return run_check("13 b-holomorphy: flat function", 1e-10, "a b-holomorphic function flat along Z",
                   [&](ReportBuilder& b) {
                     const Expr f = bholo("flat").expr;
                     Grid g;
                     g.x_min = 1e-3, g.x_max = 1, g.x_step = 0.01;
                     g.y_min = -std::numbers::pi / 4 + 0.01, g.y_max = std::numbers::pi / 4 - 0.01, g.y_step = 0.05;
                     b.measure(residual_sup(f, 1, g).sup, "residual on x in [1e-3, 1]");
                     Expr d = f;
                     for (int j = 0; j <= 3; ++j) {
                       for (double y : {-0.7, 0.0, 0.5}) {
                         const double v = std::abs(eval_at_point(d, {1e-3, y}));
                         b.check(v < 1e-40, "derivative order " + std::to_string(j) + " below 1e-40 at x=1e-3",
                                 "y=" + fmt(y), fmt(v), "< 1e-40");
                       }
                       d = differentiate(d, Var::X);
                     }
                   });
}

inline VerificationReport entire_check() {
  return run_check("13 b-holomorphy: pushforward to entire functions", 1e-10, "f(e^X, Y) is entire",
                   [&](ReportBuilder& b) {
                     for (int n = 1; n <= 3; ++n) {
                       const BHoloFunction& f = bholo(n == 1 ? "u" : "u^" + std::to_string(n));
                       const EntireResult e = b_to_entire(f.expr);
                       b.check(e.round_trip, f.name + " round trip on x > 0", "", to_string(e.F));
                       b.measure(compare_on(e.F, entire_from_w("exp(" + std::to_string(n) + "*w)"),
                                            Sampler::generic(), 1e-10)
                                     .max_error,
                                 f.name + " -> exp(" + std::to_string(n) + "w)", "", to_string(e.F));
                     }
                   });
}

inline VerificationReport norm_check() {
  return run_check("13 b-Segal-Bargmann norms", 1e-6, "Gaussian-weighted L2 norm of the pushforward",
                   [&](ReportBuilder& b) {
                     for (int n = 0; n <= 2; ++n) {
                       const Expr F = n == 0 ? Expr::real(1) : entire_from_w("exp(" + std::to_string(n) + "*w)");
                       const NormResult r = bargmann_norm_sq(F, {64, true});
                       const double expected = std::numbers::pi * std::exp(n * n);
                       b.measure(std::abs(r.value - expected) / expected, "norm^2 of " + to_string(F) + " (N=64)", "",
                                 fmt(r.value), fmt(expected));
                       b.check(*r.rel_change < kQuadratureAgreement, "N vs 2N agreement", to_string(F),
                               fmt(*r.rel_change), "< 1e-8");
                     }
                   });
}

inline VerificationReport membership_check() {
  return run_check("13 b-Segal-Bargmann membership", 0.0, "membership decided by quadrature convergence",
                   [&](ReportBuilder& b) {
                     for (const char* name : {"u", "u^2", "u^3"}) {
                       const auto v = b_bargmann_member(bholo(name));
                       b.check(v.verdict == Membership::Member, std::string(name) + " is a member", "",
                               to_string(v.verdict), "member");
                     }
                     const auto g = classify_entire(entire_from_w("exp(w^2)"));
                     b.check(g.verdict == Membership::NotMember, "exp(w^2) is not a member", "",
                             to_string(g.verdict), "not-member");
                   });
}

}  // namespace suite

/// Every check in a fixed order; report names carry a numeric prefix by stage
/// and the output is ordered by that prefix.
inline std::vector<VerificationReport> run_suite(const std::vector<int>& k_values, std::uint64_t seed = 0) {
  if (k_values.empty()) throw std::invalid_argument("run_suite: no k values");
  for (int k : k_values)
    if (k < 1) throw std::invalid_argument("run_suite: k must be >= 1");
  using namespace suite;
  std::vector<VerificationReport> out;
  const auto add = [&](auto&& make) {
    try {
      out.push_back(make());
    } catch (const std::exception& err) {
      out.push_back(run_check("crashed check", 0.0, "", [&](ReportBuilder& b) { b.crash(err.what()); }));
    }
  };
  add([&] { return print_parse_roundtrip(seed); });
  add([&] { return simplify_preserves(seed); });
  add([&] { return derivative_vs_difference(seed); });
  add([&] { return pushforward_example(seed); });
  for (int k : k_values) add([&] { return generator_check(k, seed); });
  for (int k : k_values)
    add([&] {
      auto r = catalog_automorphism_check(k, seed);
      r.check_name = "04 " + r.check_name;
      return r;
    });
  for (int k : k_values) add([&] { return counterexample_check(k, seed); });
  for (int k : k_values)
    add([&] {
      auto r = closure_check(k, seed);
      r.check_name = "06 " + r.check_name;
      return r;
    });
  for (int k : k_values) {
    add([&] { return conjugation_check(k, seed); });
    add([&] {
      auto r = conjugation_consistency_check(k, seed);
      r.check_name = "07 " + r.check_name;
      return r;
    });
  }
  for (int k : k_values) {
    add([&] { return elliptic_probe_check(k); });
    add([&] { return extension_probe_check(k); });
  }
  for (int k : k_values) {
    const Catalog c = catalog(k);
    const Sampler s = Sampler::generic(seed);
    for (const auto& fam : c.families)
      add([&] {
        auto r = group_law_check(fam, default_group_params(), s);
        r.check_name = "09 " + r.check_name;
        return r;
      });
    add([&] {
      auto r = relation_check(k, default_group_params(), s);
      r.check_name = "09 " + r.check_name;
      return r;
    });
    add([&] {
      auto r = semidirect_check(k, seed);
      r.check_name = "10 " + r.check_name;
      return r;
    });
  }
  for (int k : k_values) add([&] { return faithfulness_check(k, seed); });
  for (int k : k_values) {
    const Catalog c = catalog(k);
    Sampler s = Sampler::generic(seed);
    s.count = 8;
    for (const auto& fam : c.families)
      add([&] {
        auto r = one_parameter_check(family_generator(fam, k), fam, s);
        r.check_name = "12 " + r.check_name + tag(k);
        return r;
      });
  }
  const auto prefixed = [](VerificationReport r) {
    r.check_name = "12 " + r.check_name;
    return r;
  };
  add([&] { return prefixed(mobius_flow_check(seed)); });
  add([&] { return prefixed(rk4_order_check(seed)); });
  add([&] { return prefixed(flow_group_check(seed)); });
  add([&] { return prefixed(strip_example_check()); });
  add([&] { return residual_check(); });
  add([&] { return flat_check(); });
  add([&] { return entire_check(); });
  add([&] { return norm_check(); });
  add([&] { return membership_check(); });
  std::stable_sort(out.begin(), out.end(), [](const VerificationReport& a, const VerificationReport& b) {
    return a.check_name.substr(0, 2) < b.check_name.substr(0, 2);
  });
  return out;
}

}  // namespace bkc
