#pragma once

#include <cstdint>
#include <optional>

#include "bkc/eval.hpp"
#include "bkc/expr.hpp"
#include "bkc/sampler.hpp"

namespace bkc {

/// Random expression trees in x, y for property checks. Trees are kept
/// shallow and use only operations that stay finite on x in [0.1, 3],
/// y in [-3, 3].
class RandomExpr {
 public:
  explicit RandomExpr(std::uint64_t seed, int max_depth = 4) : rng_(seed), max_depth_(max_depth) {}

  Expr next() { return node(max_depth_); }

  /// A tree that evaluates cleanly at every point of `s`.
  template <class Points>
  Expr next_evaluable(const Points& s) {
    const auto pts = s.points();
    for (;;) {
      Expr e = next();
      bool ok = true;
      try {
        for (const auto& p : pts) {
          const cplx v = eval(e, Env{p.x, p.y, 0.0});
          if (std::abs(v) > 1e8) ok = false;
        }
      } catch (const EvalError&) {
        ok = false;
      }
      if (ok) return e;
    }
  }

 private:
  Expr leaf() {
    switch (rng_.below(8)) {
      case 0:
      case 1: return Expr::x();
      case 2:
      case 3: return Expr::y();
      case 4: return Expr::real(std::round(rng_.uniform(-40.0, 40.0)) / 8.0);
      case 5: return Expr::constant(cplx(std::round(rng_.uniform(-16, 16)) / 4.0, std::round(rng_.uniform(-16, 16)) / 4.0));
      case 6: return Expr::i();
      default: return rng_.coin() ? Expr::pi() : Expr::e();
    }
  }

  Expr node(int depth) {
    if (depth <= 0 || rng_.below(6) == 0) return leaf();
    const int d = depth - 1;
    switch (rng_.below(15)) {
      case 0:
      case 1: return node(d) + node(d);
      case 2: return node(d) - node(d);
      case 3:
      case 4: return node(d) * node(d);
      case 5: return node(d) / (Expr::real(2.0) + Expr::x() * Expr::x());
      case 6: return pow(node(d), Expr::real(static_cast<double>(rng_.below(4))));
      case 7: return exp(node(d) / Expr::real(4.0));
      case 8: return sin(node(d));
      case 9: return cos(node(d));
      case 10: return log(Expr::x() + Expr::real(rng_.uniform(0.5, 2.0)));
      case 11: return sqrt(Expr::x());
      case 12: return -node(d);
      case 13:
        switch (rng_.below(3)) {
          case 0: return conj(node(d));
          case 1: return re(node(d));
          default: return im(node(d));
        }
      default:
        return Expr::ifpos(Expr::x() - Expr::real(std::round(rng_.uniform(0.5, 2.5) * 8) / 8 + 1.0 / 16), node(d),
                           node(d));
    }
  }

  Rng rng_;
  int max_depth_;
};

}  // namespace bkc
