#pragma once

#include "bkc/expr.hpp"

// Folding constructors: identical semantics to the raw operators, minus the
// obvious 0/1 clutter. Used by differentiation and composition.
namespace bkc::mk {

inline Expr neg(const Expr& a) {
  if (a.is_const()) return Expr::constant(-a.value());
  if (a.op() == Op::Neg) return a.arg(0);
  return -a;
}

inline Expr add(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() + b.value());
  if (b.op() == Op::Neg) return a - b.arg(0);
  return a + b;
}

inline Expr sub(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return neg(b);
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() - b.value());
  if (b.op() == Op::Neg) return a + b.arg(0);
  return a - b;
}

inline Expr mul(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::real(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_const(-1.0)) return neg(b);
  if (b.is_const(-1.0)) return neg(a);
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() * b.value());
  return a * b;
}

inline Expr div(const Expr& a, const Expr& b) {
  if (a.is_zero()) return Expr::real(0.0);
  if (b.is_one()) return a;
  return a / b;
}

inline Expr pow(const Expr& a, const Expr& b) {
  if (b.is_zero()) return Expr::real(1.0);
  if (b.is_one()) return a;
  return bkc::pow(a, b);
}

}  // namespace bkc::mk
