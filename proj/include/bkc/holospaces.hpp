#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkc/bkstructure.hpp"
#include "bkc/geometry.hpp"
#include "bkc/quadrature.hpp"
#include "bkc/report.hpp"

namespace bkc {

/// A function annihilated by L_k. `entire` is its pushforward through
/// (x, y) -> (log x, y), written in x, y standing for w = x + iy.
struct BHoloFunction {
  std::string name;
  Expr expr;
  Domain domain;
  std::optional<Expr> entire;
  /// Restricts evaluation to |x| < this (poles of the composed function).
  double x_bound = std::numeric_limits<double>::infinity();
};

inline Expr u_expr() { return parse_expr("x*exp(i*y)"); }

inline Expr entire_from_w(const std::string& text) { return parse_expr(text, ParseOptions{.k = std::nullopt, .allow_w = true}); }

/// u = x e^(iy), its powers, h o u for h(w) = w/(1 - w), and the flat function.
inline std::vector<BHoloFunction> catalog_bholo() {
  std::vector<BHoloFunction> out;
  out.push_back({"u", u_expr(), Domain::plane(), entire_from_w("exp(w)")});
  out.push_back({"u^2", parse_expr("(x*exp(i*y))^2"), Domain::plane(), entire_from_w("exp(2*w)")});
  out.push_back({"u^3", parse_expr("(x*exp(i*y))^3"), Domain::plane(), entire_from_w("exp(3*w)")});
  out.push_back({"h(u), h(w) = w/(1-w)", parse_expr("x*exp(i*y)/(1 - x*exp(i*y))"), Domain::plane(), std::nullopt, 1.0});
  out.push_back({"flat", parse_expr("ifpos(x, exp(-1/(x*exp(i*y))), 0)"), Domain::strip(-std::numbers::pi / 4, std::numbers::pi / 4),
                 entire_from_w("exp(-exp(-w))")});
  return out;
}

inline const BHoloFunction& bholo(const std::string& name) {
  static const std::vector<BHoloFunction> table = catalog_bholo();
  for (const auto& f : table)
    if (f.name == name) return f;
  throw std::invalid_argument("no catalog function '" + name + "'");
}

/// x^k f_x + i f_y
inline Expr bk_residual(const Expr& f, int k) {
  return simplify(generator(k).apply(f));
}

struct ResidualResult {
  double sup = 0.0;
  Expr residual;
  std::optional<Point> worst;
};

/// sup over the points of |x^k f_x + i f_y|, derivatives taken symbolically.
template <class Points>
ResidualResult residual_sup(const Expr& f, int k, const Points& grid) {
  ResidualResult r;
  r.residual = bk_residual(f, k);
  for (const Point& p : grid.points()) {
    const double v = std::abs(eval_at_point(r.residual, p));
    if (!r.worst || v > r.sup) {
      r.sup = v;
      r.worst = p;
    }
  }
  return r;
}

struct EntireResult {
  Expr F;
  /// Set when simplification failed and F is only the substituted form.
  bool unsimplified = false;
  bool round_trip = false;
};

/// F(X, Y) = f(e^X, Y), checked against f on the right half-plane.
inline EntireResult b_to_entire(const Expr& f) {
  EntireResult r;
  const Expr raw = substitute(f, Substitution{Expr::unary(Op::Exp, Expr::x()), Expr::y(), std::nullopt});
  try {
    r.F = simplify(raw);
  } catch (const std::exception&) {
    r.F = raw;
    r.unsimplified = true;
  }
  const Expr back = substitute(r.F, Substitution{Expr::unary(Op::Log, Expr::x()), Expr::y(), std::nullopt});
  try {
    r.round_trip = compare_on(back, f, Domain::right_half().sampler(0, 32), 1e-9).equal;
  } catch (const EvalError&) {
    r.round_trip = false;
  }
  return r;
}

inline EntireResult b_to_entire(BHoloFunction& f) {
  EntireResult r = b_to_entire(f.expr);
  if (r.round_trip && !f.entire) f.entire = r.F;
  return r;
}

struct QuadratureSpec {
  int nodes = 64;
  bool check_convergence = true;
};

struct NormResult {
  double value = 0.0;
  int nodes = 0;
  bool converged = false;
  /// |I(2N) - I(N)| / |I(2N)|, when computed.
  std::optional<double> rel_change;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, NormResult partial) : std::runtime_error(what), partial_(partial) {}
  const NormResult& partial() const { return partial_; }

 private:
  NormResult partial_;
};

inline constexpr double kQuadratureAgreement = 1e-8;

/// Tensor Gauss-Hermite sum for the double integral of |F|^2 e^(-x^2-y^2).
inline double bargmann_quadrature(const Expr& F, int n) {
  const GaussHermite g = gauss_hermite(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const cplx v = eval_at_point(F, {g.nodes[i], g.nodes[j]});
      sum += g.weights[i] * g.weights[j] * std::norm(v);
    }
  if (!std::isfinite(sum)) throw EvalError("quadrature sum overflowed");
  return sum;
}

/// The squared b-Segal-Bargmann norm; with the convergence flag set, N and
/// 2N must agree to 1e-8 relative.
inline NormResult bargmann_norm_sq(const Expr& F, QuadratureSpec q = {}) {
  if (q.nodes < 16) throw std::invalid_argument("bargmann_norm_sq: at least 16 nodes required");
  NormResult r;
  r.nodes = q.nodes;
  r.value = bargmann_quadrature(F, q.nodes);
  if (!q.check_convergence) return r;
  const double finer = bargmann_quadrature(F, 2 * q.nodes);
  r.rel_change = std::abs(finer - r.value) / std::max(std::abs(finer), std::numeric_limits<double>::min());
  r.converged = *r.rel_change < kQuadratureAgreement;
  if (!r.converged)
    throw QuadratureError("quadrature did not converge between N=" + std::to_string(q.nodes) + " and 2N (relative change " +
                              fmt(*r.rel_change) + "); divergence suspected",
                          r);
  return r;
}

enum class Membership { Member, NotMember, Undecided };

inline std::string to_string(Membership m) {
  switch (m) {
    case Membership::Member: return "member";
    case Membership::NotMember: return "not-member";
    case Membership::Undecided: return "undecided";
  }
  return "?";
}

struct MembershipVerdict {
  Membership verdict = Membership::Undecided;
  std::optional<double> norm_sq;
  std::optional<double> rel_change;
  std::string evidence;
  Expr F;
};

/// Membership of an entire F from quadrature convergence: relative change
/// below 1e-8 is a member, at least 1e-2 (or overflow) is not.
inline MembershipVerdict classify_entire(const Expr& F, QuadratureSpec q = {}) {
  MembershipVerdict v;
  v.F = F;
  q.check_convergence = true;
  try {
    const NormResult r = bargmann_norm_sq(F, q);
    v.verdict = Membership::Member;
    v.norm_sq = r.value;
    v.rel_change = r.rel_change;
    v.evidence = "quadrature converged";
  } catch (const QuadratureError& err) {
    v.rel_change = err.partial().rel_change;
    v.verdict = *v.rel_change >= 1e-2 ? Membership::NotMember : Membership::Undecided;
    v.evidence = err.what();
  } catch (const EvalError& err) {
    v.verdict = Membership::NotMember;
    v.evidence = std::string("integrand overflow: ") + err.what();
  }
  return v;
}

/// Pushes f to the plane through (log x, y) and classifies the result.
inline MembershipVerdict b_bargmann_member(const Expr& f, QuadratureSpec q = {}) {
  const EntireResult e = b_to_entire(f);
  if (!e.round_trip) {
    MembershipVerdict v;
    v.F = e.F;
    v.evidence = "pushforward does not reproduce f on the right half-plane";
    return v;
  }
  return classify_entire(e.F, q);
}

inline MembershipVerdict b_bargmann_member(const BHoloFunction& f, QuadratureSpec q = {}) {
  return b_bargmann_member(f.expr, q);
}

inline void to_json(json& j, const NormResult& r) {
  j = json{{"value", r.value}, {"nodes", r.nodes}, {"converged", r.converged},
           {"rel_change", r.rel_change ? json(*r.rel_change) : json(nullptr)}};
}

inline void to_json(json& j, const MembershipVerdict& v) {
  j = json{{"verdict", to_string(v.verdict)},
           {"value", v.norm_sq ? json(*v.norm_sq) : json(nullptr)},
           {"rel_change", v.rel_change ? json(*v.rel_change) : json(nullptr)},
           {"evidence", v.evidence},
           {"entire", to_string(v.F)}};
}

}  // namespace bkc
