#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bkc/expr.hpp"
#include "bkc/print.hpp"

namespace bkc {

/// Domain violation during numeric evaluation (log of a nonpositive real,
/// division by zero, overflow). Evaluation never returns NaN silently.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Env {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

namespace detail {

inline bool on_negative_axis(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0; }

inline cplx checked(cplx v, const Expr& e) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw EvalError("non-finite value in " + to_string(e));
  }
  return v;
}

inline cplx int_pow(cplx base, long long n, const Expr& e) {
  if (n < 0) {
    if (base == cplx(0.0)) throw EvalError("division by zero in " + to_string(e));
    return 1.0 / int_pow(base, -n, e);
  }
  cplx result = 1.0;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

inline bool integral(cplx p) {
  return p.imag() == 0.0 && std::abs(p.real()) < 9.0e15 && p.real() == std::floor(p.real());
}

}  // namespace detail

/// Principal-branch complex power; integer exponents use repeated
/// multiplication, other exponents require a base off the cut (-inf, 0].
inline cplx checked_pow(cplx base, cplx p, const Expr& where) {
  if (detail::integral(p)) return detail::int_pow(base, static_cast<long long>(p.real()), where);
  if (base == cplx(0.0)) {
    if (p.real() > 0.0) return 0.0;
    throw EvalError("zero base with non-positive exponent in " + to_string(where));
  }
  if (detail::on_negative_axis(base)) throw EvalError("non-integer power of a negative real in " + to_string(where));
  if (base.imag() == 0.0 && p.imag() == 0.0) return std::pow(base.real(), p.real());
  return std::exp(p * std::log(base));
}

inline cplx eval(const Expr& e, const Env& env) {
  using detail::checked;
  switch (e.op()) {
    case Op::Const: return e.value();
    case Op::Pi: return std::numbers::pi;
    case Op::E: return std::numbers::e;
    case Op::I: return cplx(0.0, 1.0);
    case Op::Var:
      switch (e.variable()) {
        case Var::X: return env.x;
        case Var::Y: return env.y;
        case Var::T: return env.t;
      }
      return 0.0;
    case Op::IfPos: {
      const cplx g = eval(e.arg(0), env);
      // strict: the boundary takes the else-branch
      return g.real() > 0.0 ? eval(e.arg(1), env) : eval(e.arg(2), env);
    }
    default: break;
  }

  const cplx a = eval(e.arg(0), env);
  switch (e.op()) {
    case Op::Exp: return checked(a.imag() == 0.0 ? cplx(std::exp(a.real())) : std::exp(a), e);
    case Op::Log:
      if (detail::on_negative_axis(a)) throw EvalError("log of nonpositive real in " + to_string(e));
      return a.imag() == 0.0 ? cplx(std::log(a.real())) : std::log(a);
    case Op::Sin: return checked(a.imag() == 0.0 ? cplx(std::sin(a.real())) : std::sin(a), e);
    case Op::Cos: return checked(a.imag() == 0.0 ? cplx(std::cos(a.real())) : std::cos(a), e);
    case Op::Tan: {
      const cplx c = a.imag() == 0.0 ? cplx(std::cos(a.real())) : std::cos(a);
      if (c == cplx(0.0)) throw EvalError("tan pole in " + to_string(e));
      return checked((a.imag() == 0.0 ? cplx(std::sin(a.real())) : std::sin(a)) / c, e);
    }
    case Op::Sqrt:
      if (a.imag() == 0.0 && a.real() < 0.0) throw EvalError("sqrt of negative real in " + to_string(e));
      return a.imag() == 0.0 ? cplx(std::sqrt(a.real())) : std::sqrt(a);
    case Op::Neg: return -a;
    case Op::Conj: return std::conj(a);
    case Op::Re: return a.real();
    case Op::Im: return a.imag();
    default: break;
  }

  const cplx b = eval(e.arg(1), env);
  switch (e.op()) {
    case Op::Add: return checked(a + b, e);
    case Op::Sub: return checked(a - b, e);
    case Op::Mul: {
      // exact zero absorbs, so underflowed factors do not turn into NaN against inf
      if (a == cplx(0.0) || b == cplx(0.0)) return 0.0;
      return checked(a * b, e);
    }
    case Op::Div:
      if (b == cplx(0.0)) throw EvalError("division by zero in " + to_string(e));
      if (a == cplx(0.0)) return 0.0;
      return checked(a / b, e);
    case Op::Pow: return checked(checked_pow(a, b, e), e);
    default: break;
  }
  throw EvalError("malformed expression");
}

inline cplx eval_at(const Expr& e, double x, double y, double t = 0.0) { return eval(e, Env{x, y, t}); }

/// Real part, rejecting values whose imaginary part is not negligible.
inline double eval_real(const Expr& e, const Env& env, double imag_tol = 1e-9) {
  const cplx v = eval(e, env);
  if (std::abs(v.imag()) > imag_tol * (1.0 + std::abs(v.real()))) {
    throw EvalError("expected a real value from " + to_string(e));
  }
  return v.real();
}

}  // namespace bkc
