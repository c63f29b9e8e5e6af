#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "bkc/expr.hpp"

namespace bkc {

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  if (std::abs(v) < 1e15 && v == std::floor(v)) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", v);
  }
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

// Binding strength used when deciding where parentheses are needed.
inline int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      // negative and complex literals print parenthesized, so they count as atoms
      return 5;
  }
}

inline void print_to(std::string& out, const Expr& e);

inline void print_wrapped(std::string& out, const Expr& e, bool wrap) {
  if (wrap) out += '(';
  print_to(out, e);
  if (wrap) out += ')';
}

inline void print_to(std::string& out, const Expr& e) {
  switch (e.op()) {
    case Op::Const: {
      const cplx c = e.value();
      if (c.imag() == 0.0) {
        const std::string r = format_real(c.real());
        if (r[0] == '-') {
          out += '(' + r + ')';
        } else {
          out += r;
        }
      } else if (c.real() == 0.0) {
        out += '(' + format_real(c.imag()) + "*i)";
      } else {
        std::string im = format_real(c.imag());
        if (im[0] != '-') im = "+" + im;
        out += '(' + format_real(c.real()) + im + "*i)";
      }
      return;
    }
    case Op::Pi: out += "pi"; return;
    case Op::E: out += "e"; return;
    case Op::I: out += "i"; return;
    case Op::Var: out += var_name(e.variable()); return;
    case Op::Neg:
      out += '-';
      print_wrapped(out, e.arg(0), precedence(e.arg(0)) <= 3);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const int p = precedence(e);
      const bool left_assoc_only = e.op() == Op::Sub || e.op() == Op::Div;
      print_wrapped(out, e.arg(0), precedence(e.arg(0)) < p);
      switch (e.op()) {
        case Op::Add: out += " + "; break;
        case Op::Sub: out += " - "; break;
        case Op::Mul: out += '*'; break;
        default: out += '/'; break;
      }
      const int pr = precedence(e.arg(1));
      print_wrapped(out, e.arg(1), left_assoc_only ? pr <= p : pr < p);
      return;
    }
    case Op::Pow:
      print_wrapped(out, e.arg(0), precedence(e.arg(0)) <= 4);
      out += '^';
      print_wrapped(out, e.arg(1), precedence(e.arg(1)) < 5);
      return;
    case Op::IfPos:
      out += "ifpos(";
      print_to(out, e.arg(0));
      out += ", ";
      print_to(out, e.arg(1));
      out += ", ";
      print_to(out, e.arg(2));
      out += ')';
      return;
    default:
      out += function_name(e.op());
      out += '(';
      print_to(out, e.arg(0));
      out += ')';
      return;
  }
}

}  // namespace detail

/// Renders in the same grammar parse_expr() accepts; constants keep 17
/// significant digits so printing then parsing is lossless.
inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_to(out, e);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace bkc
