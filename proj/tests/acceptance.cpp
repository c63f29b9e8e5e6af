// One pass/fail line per acceptance criterion; exit status 0 iff all pass.
// Usage: acceptance <path to bkc executable>
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bkc/suite.hpp"

using namespace bkc;

namespace {

// Pinned tolerances.
constexpr double kSymbolicEq = 1e-10;
constexpr double kCross = 1e-9;
constexpr double kNearZ = 1e-4;
constexpr double kCotTol = 1e-3;
constexpr double kBlowUp = 1e3;
constexpr double kGroup = 1e-10;
constexpr double kMobius = 1e-8;
constexpr double kOrderLo = 8.0, kOrderHi = 32.0;
constexpr double kFlatResidual = 1e-10;
constexpr double kFlatDerivative = 1e-40;
constexpr double kNormRel = 1e-6;
constexpr double kNormAgreement = 1e-8;

struct Outcome {
  bool ok = true;
  std::ostringstream why;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) why << "; ";
      why << what;
      ok = false;
    }
  }
};

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

bool criterion(int n, const std::string& title, double budget_s, const std::function<void(Outcome&, std::string&)>& body) {
  Outcome o;
  std::string info;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o, info);
  } catch (const std::exception& err) {
    o.require(false, std::string("exception: ") + err.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(elapsed < budget_s, "runtime " + fmt(elapsed) + " s over budget " + fmt(budget_s) + " s");
  std::printf("[%s] %d %s (%.3f s / %.0f s)%s%s%s%s\n", pass_fail(o.ok).c_str(), n, title.c_str(), elapsed, budget_s,
              info.empty() ? "" : " | ", info.c_str(), o.ok ? "" : " | ", o.ok ? "" : o.why.str().c_str());
  return o.ok;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_command(const std::string& cmd) {
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <bkc executable>\n";
    return 2;
  }
  const std::string bkc_exe = argv[1];
  bool all = true;

  all &= criterion(1, "pushforward identity for (e^y x, y) and its rejection", 1.0, [](Outcome& o, std::string& info) {
    const PlanarMap theta = parse_map("(exp(y)*x, y)");
    const ComplexVectorField X = parse_field("(0, 1)"), Y = parse_field("(x, 1)");
    const ComplexVectorField res = pushforward_residual(theta, X, Y);
    o.require(res.a.is_zero() && res.b.is_zero(), "symbolic residual is (" + to_string(res.a) + ", " + to_string(res.b) + ")");
    const Comparison c = relates(theta, X, Y, Sampler::generic(), kSymbolicEq);
    o.require(c.equal, "pointwise relates error " + fmt(c.max_error));
    for (int k : {1, 2}) o.require(!is_bk_automorphism(theta, k, bk_sampler()).holds, "accepted for k=" + std::to_string(k));
    const Point p{0.5, 0.2};
    const CVec pushed = pushforward_at(theta, generator(1), p);
    const CVec target = generator(1).at(theta(p));
    const cplx r1 = pushed.a / target.a, r2 = pushed.b / target.b;
    o.require(std::abs(r1 - cplx(1, 1)) < 1e-12 && std::abs(r2 - 1.0) < 1e-12,
              "component ratios " + fmt(r1) + ", " + fmt(r2));
    info = "k=1 ratios " + fmt(r1) + " vs " + fmt(r2);
  });

  all &= criterion(2, "catalog families, flip and counterexamples under the automorphism criterion", 5.0,
                   [](Outcome& o, std::string& info) {
                     const Sampler s = bk_sampler();
                     double min_x = 1.0, worst = 0.0;
                     for (const Point& p : s.points()) min_x = std::min(min_x, std::abs(p.x));
                     o.require(s.points().size() == 64, "sampler size " + std::to_string(s.points().size()));
                     o.require(std::abs(min_x - kNearZ) < 1e-15, "sampler reaches |x| = " + fmt(min_x));
                     for (int k : {1, 2, 3}) {
                       const Catalog c = catalog(k);
                       for (const auto& fam : c.families)
                         for (double t : {-1.0, -0.3, 0.7, 2.0}) {
                           const auto v = is_bk_automorphism(fam.at(t), k, s);
                           worst = std::max(worst, v.max_cross);
                           o.require(v.holds && v.max_cross <= kCross,
                                     fam.name + " k=" + std::to_string(k) + " t=" + fmt(t) + ": " + v.reason);
                         }
                       const auto f = is_bk_automorphism(c.flip, k, s);
                       const double expected = std::pow(-1.0, k) * -1.0;
                       o.require(f.holds, "flip k=" + std::to_string(k) + ": " + f.reason);
                       for (const auto& ls : f.lambda_samples)
                         o.require(std::abs(ls.lambda - expected) < 1e-12, "flip lambda " + fmt(ls.lambda));
                       for (const char* bad : {"(exp(y)*x, y)", "(x, y + x)"})
                         o.require(!is_bk_automorphism(parse_map(bad), k, s).holds,
                                   std::string(bad) + " accepted for k=" + std::to_string(k));
                     }
                     info = "max cross-determinant " + fmt(worst);
                   });

  all &= criterion(3, "conjugation through the half-plane maps", 2.0, [](Outcome& o, std::string& info) {
    const Sampler s = Domain::right_half().sampler();
    const HalfPlaneIso iso2 = halfplane_iso(2);
    const PlanarMap a = conjugate_through(iso2, target_dilation());
    const PlanarMap n = conjugate_through(iso2, target_translation_real());
    for (double t : {-1.0, -0.3, 0.7, 2.0}) {
      const PlanarMap ha{parse_expr("exp(" + fmt(-t) + ")*x"), parse_expr("exp(" + fmt(t) + ")*y"), {}, {}};
      const PlanarMap ta{Expr::x(), Expr::y() + Expr::real(t), {}, {}};
      const Comparison ca = compare_maps(a.at_t(t), ha, s, kSymbolicEq);
      const Comparison cn = compare_maps(n.at_t(t), ta, s, kSymbolicEq);
      o.require(ca.equal, "k=2 dilation at t=" + fmt(t) + " gives " + a.at_t(t).to_string());
      o.require(cn.equal, "k=2 translation at t=" + fmt(t) + " gives " + n.at_t(t).to_string());
    }
    const HalfPlaneIso iso1 = halfplane_iso(1);
    const PlanarMap shift = conjugate_through(iso1, target_translation_real());
    double printed_gap = 0.0;
    for (double sv : {-1.0, 0.5, 2.0}) {
      const PlanarMap expect{parse_expr("exp(" + fmt(sv) + ")*x"), Expr::y(), {}, {}};
      const Comparison c = compare_maps(shift.at_t(sv), expect, s, kSymbolicEq);
      o.require(c.equal, "k=1 z+s at s=" + fmt(sv) + " gives " + shift.at_t(sv).to_string());
      const PlanarMap printed{Expr::x() + Expr::real(sv), Expr::y(), {}, {}};
      printed_gap = std::max(printed_gap, compare_maps(shift.at_t(sv), printed, s, kSymbolicEq).max_error);
    }
    info = "k=1 z+s -> " + shift.to_string() + "; gap to (x+s, y) form " + fmt(printed_gap) + " (logged)";
  });

  all &= criterion(4, "non-extendability of elliptic and scaling pullbacks", 1.0, [](Outcome& o, std::string& info) {
    const double t = std::numbers::pi / 4;
    for (double y0 : {0.0, 1.0}) {
      const auto r = extendability_probe(elliptic_pullback(2, t), y0);
      o.require(!r.extends, "elliptic y0=" + fmt(y0) + " classified extends");
      bool seen = false;
      for (const auto& row : r.table) {
        if (row.x != 1e-6) continue;
        seen = true;
        o.require(std::abs(row.value.y - 1.0 / std::tan(t)) <= kCotTol, "second component " + fmt(row.value.y));
        o.require(row.value.x > kBlowUp, "first component " + fmt(row.value.x));
        if (y0 == 0.0) info = "x=1e-6: (" + fmt(row.value.x) + ", " + fmt(row.value.y) + ")";
      }
      o.require(seen, "no probe at x=1e-6");
    }
    const HalfPlaneIso iso = halfplane_iso(1);
    for (auto [s, tt] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.5, -1.0}}) {
      const PlanarMap m = conjugate_through(iso, target_complex_scaling(s, tt));
      const auto r = extendability_probe(m, 0.0);
      o.require(!r.extends, "scaling pullback s=" + fmt(s) + " t=" + fmt(tt) + " classified extends");
      if (s == 1.0) info += "; (1+i) scaling: " + r.trend;
    }
  });

  all &= criterion(5, "group laws, relations, semidirect structure and action on Z", 2.0, [](Outcome& o, std::string& info) {
    const Sampler s = Sampler::generic();
    double worst = 0.0;
    for (int k : {1, 2, 3}) {
      const Catalog c = catalog(k);
      for (const auto& fam : c.families) {
        const auto r = group_law_check(fam, default_group_params(), s);
        worst = std::max(worst, r.max_error);
        o.require(r.passed() && r.max_error <= kGroup, r.check_name);
      }
      const auto rel = relation_check(k, default_group_params(), s);
      o.require(rel.passed() && rel.max_error <= kGroup, rel.check_name);
      const auto sd = semidirect_check(k);
      o.require(sd.passed(), sd.check_name);
      const auto f = faithfulness_on_z(k);
      if (k == 1) o.require(!f.faithful, "k=1 acts faithfully on Z");
      else o.require(f.faithful, "k=" + std::to_string(k) + " not faithful: " + f.witness.value_or(""));
    }
    info = "max group-law error " + fmt(worst);
  });

  all &= criterion(6, "Moebius flow accuracy, RK4 order and strip confinement", 5.0, [](Outcome& o, std::string& info) {
    const auto seeds = mobius_seeds(20, 0);
    double worst = 0.0;
    for (const Point& z0 : seeds) {
      const cplx z(z0.x, z0.y);
      o.require(std::abs(1.0 - 0.5 * z) > 0.2, "seed " + to_string(z0) + " too close to the pole");
      worst = std::max(worst, mobius_flow_error(z0, 0.5, 1e-3));
    }
    o.require(worst <= kMobius, "Moebius error " + fmt(worst));
    double lo = 1e300, hi = 0.0;
    for (const Point& z0 : seeds) {
      const double ratio = mobius_flow_error(z0, 0.5, 0.02) / mobius_flow_error(z0, 0.5, 0.01);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    o.require(lo >= kOrderLo && hi <= kOrderHi, "halving ratios in [" + fmt(lo) + ", " + fmt(hi) + "]");
    double flo = 1e300, fhi = 0.0;
    for (const Point& z0 : seeds) {
      const double ratio = mobius_flow_error(z0, 0.5, 1e-3) / mobius_flow_error(z0, 0.5, 5e-4);
      flo = std::min(flo, ratio);
      fhi = std::max(fhi, ratio);
    }
    const ComplexVectorField W = strip_real_field();
    const Domain strip = strip_domain();
    int inside = 0;
    for (const Point& p : strip_seeds()) {
      bool ok = true;
      for (double tt : {-2.0, 2.0}) {
        FlowProblem fp{W, p, tt, 1e-3, strip, true};
        const FlowResult r = integrate_flow(fp);
        ok = ok && r.completed();
        for (const auto& row : r.trajectory) ok = ok && strip.contains(row.p);
      }
      inside += ok;
      o.require(ok, "strip trajectory from " + to_string(p) + " leaves the strip");
    }
    o.require(strip_seeds().size() == 10, "strip seed count");
    info = "max error " + fmt(worst) + "; h 0.02->0.01 ratios [" + fmt(lo) + ", " + fmt(hi) + "]; h 1e-3->5e-4 ratios [" +
           fmt(flo) + ", " + fmt(fhi) + "] (roundoff floor); strip seeds inside " + std::to_string(inside) + "/10";
  });

  all &= criterion(7, "b-holomorphic residuals and flatness", 2.0, [](Outcome& o, std::string& info) {
    Grid plane;
    plane.x_min = -2, plane.x_max = 2, plane.x_step = 0.25, plane.y_min = -3, plane.y_max = 3, plane.y_step = 0.25;
    for (const char* name : {"u", "u^2", "u^3"}) {
      const auto r = residual_sup(bholo(name).expr, 1, plane);
      o.require(r.residual.is_zero() && r.sup == 0.0, std::string(name) + " residual " + to_string(r.residual));
    }
    const Expr flat = bholo("flat").expr;
    Grid g;
    g.x_min = 1e-3, g.x_max = 1, g.x_step = 1e-3;
    g.y_min = -std::numbers::pi / 4 + 0.01, g.y_max = std::numbers::pi / 4 - 0.01, g.y_step = 0.02;
    const auto fr = residual_sup(flat, 1, g);
    o.require(fr.sup < kFlatResidual, "flat residual " + fmt(fr.sup));
    double largest = 0.0;
    Expr d = flat;
    for (int j = 1; j <= 3; ++j) {
      d = differentiate(d, Var::X);
      for (double y : {-0.7, -0.3, 0.0, 0.4, 0.75}) largest = std::max(largest, std::abs(eval_at_point(d, {1e-3, y})));
    }
    o.require(largest < kFlatDerivative, "flat derivative " + fmt(largest));
    info = "flat residual sup " + fmt(fr.sup) + "; largest derivative at x=1e-3 " + fmt(largest);
  });

  all &= criterion(8, "b-Segal-Bargmann norms by Gauss-Hermite quadrature", 3.0, [](Outcome& o, std::string& info) {
    for (int n = 0; n <= 2; ++n) {
      const Expr F = n == 0 ? Expr::real(1) : entire_from_w("exp(" + std::to_string(n) + "*w)");
      const NormResult r = bargmann_norm_sq(F, {64, true});
      const double expected = std::numbers::pi * std::exp(n * n);
      const double rel = std::abs(r.value - expected) / expected;
      o.require(rel <= kNormRel, to_string(F) + " norm^2 " + fmt(r.value) + " vs " + fmt(expected));
      o.require(*r.rel_change < kNormAgreement, to_string(F) + " N vs 2N " + fmt(*r.rel_change));
      info += (n ? "; " : "") + fmt(r.value);
    }
  });

  all &= criterion(9, "verify-all --k 1,2,3 exit code and deterministic JSON", 60.0, [&](Outcome& o, std::string& info) {
    const std::string cmd = "BKC_SEED=20261016 '" + bkc_exe + "' verify-all --k 1,2,3 --json";
    const Run a = run_command(cmd);
    const Run b = run_command(cmd);
    o.require(a.code == 0, "exit code " + std::to_string(a.code));
    o.require(b.code == 0, "exit code of second run " + std::to_string(b.code));
    o.require(!a.out.empty() && a.out == b.out, "outputs differ");
    const json j = json::parse(a.out);
    o.require(j.at("schema") == 1, "schema");
    info = std::to_string(j.at("reports").size()) + " reports, " + std::to_string(a.out.size()) + " bytes";
  });

  std::printf("%s\n", all ? "all criteria pass" : "some criteria fail");
  return all ? 0 : 1;
}
