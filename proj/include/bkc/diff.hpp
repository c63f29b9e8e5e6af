#pragma once

#include "bkc/build.hpp"
#include "bkc/expr.hpp"

namespace bkc {

/// Exact symbolic partial derivative with respect to a real variable.
/// ifpos nodes differentiate branchwise (valid away from the guard boundary).
inline Expr differentiate(const Expr& e, Var v) {
  using mk::add, mk::sub, mk::mul, mk::div, mk::neg;
  const Expr zero = Expr::real(0.0);
  if (!depends_on(e, v)) return zero;

  switch (e.op()) {
    case Op::Var: return Expr::real(1.0);
    case Op::IfPos: return Expr::ifpos(e.arg(0), differentiate(e.arg(1), v), differentiate(e.arg(2), v));
    case Op::Add: return add(differentiate(e.arg(0), v), differentiate(e.arg(1), v));
    case Op::Sub: return sub(differentiate(e.arg(0), v), differentiate(e.arg(1), v));
    case Op::Mul: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      return add(mul(differentiate(a, v), b), mul(a, differentiate(b, v)));
    }
    case Op::Div: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      const Expr da = differentiate(a, v);
      const Expr db = differentiate(b, v);
      if (db.is_zero()) return div(da, b);
      return div(sub(mul(da, b), mul(a, db)), mk::pow(b, Expr::real(2.0)));
    }
    case Op::Pow: {
      const Expr& base = e.arg(0);
      const Expr& p = e.arg(1);
      const Expr dbase = differentiate(base, v);
      if (!depends_on(p, v)) {
        const Expr reduced = p.is_const() ? Expr::constant(p.value() - 1.0) : sub(p, Expr::real(1.0));
        return mul(mul(p, mk::pow(base, reduced)), dbase);
      }
      // d(a^b) = a^b (b' log a + b a'/a)
      const Expr dp = differentiate(p, v);
      return mul(e, add(mul(dp, log(base)), div(mul(p, dbase), base)));
    }
    default: break;
  }

  const Expr& a = e.arg(0);
  const Expr da = differentiate(a, v);
  switch (e.op()) {
    case Op::Neg: return neg(da);
    case Op::Exp: return mul(e, da);
    case Op::Log: return div(da, a);
    case Op::Sin: return mul(cos(a), da);
    case Op::Cos: return neg(mul(sin(a), da));
    case Op::Tan: return div(da, pow(cos(a), Expr::real(2.0)));
    case Op::Sqrt: return div(da, mul(Expr::real(2.0), e));
    // derivatives in a real variable commute with conj, re, im
    case Op::Conj: return conj(da);
    case Op::Re: return re(da);
    case Op::Im: return im(da);
    default: break;
  }
  return zero;
}

inline Expr differentiate(const Expr& e, Var v, int order) {
  Expr d = e;
  for (int j = 0; j < order; ++j) d = differentiate(d, v);
  return d;
}

}  // namespace bkc
