#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bkc {

using cplx = std::complex<double>;

enum class Op : std::uint8_t {
  Const,
  Pi,
  E,
  I,
  Var,
  // unary
  Exp,
  Log,
  Sin,
  Cos,
  Tan,
  Sqrt,
  Neg,
  Conj,
  Re,
  Im,
  // binary
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  // ternary: ifpos(g, a, b) = a where g > 0, else b
  IfPos,
};

enum class Var : std::uint8_t { X = 0, Y = 1, T = 2 };

inline constexpr int arity(Op op) {
  switch (op) {
    case Op::Const:
    case Op::Pi:
    case Op::E:
    case Op::I:
    case Op::Var:
      return 0;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      return 2;
    case Op::IfPos:
      return 3;
    default:
      return 1;
  }
}

inline constexpr bool is_unary_function(Op op) { return arity(op) == 1 && op != Op::Neg; }

inline const char* function_name(Op op) {
  switch (op) {
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Sqrt: return "sqrt";
    case Op::Conj: return "conj";
    case Op::Re: return "re";
    case Op::Im: return "im";
    case Op::IfPos: return "ifpos";
    default: return "";
  }
}

inline const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::T: return "t";
  }
  return "?";
}

/// Immutable, structurally shared expression tree over the real variables
/// x, y, t with complex constants.
class Expr {
 public:
  struct Node {
    Op op;
    cplx value{};
    Var var{Var::X};
    std::vector<Expr> args;
  };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(cplx c) { return Expr(std::make_shared<const Node>(Node{Op::Const, c, Var::X, {}})); }
  static Expr real(double v) { return constant(cplx(v, 0.0)); }
  static Expr pi() { return leaf(Op::Pi); }
  static Expr e() { return leaf(Op::E); }
  static Expr i() { return leaf(Op::I); }
  static Expr var(Var v) { return Expr(std::make_shared<const Node>(Node{Op::Var, {}, v, {}})); }
  static Expr x() { return var(Var::X); }
  static Expr y() { return var(Var::Y); }
  static Expr t() { return var(Var::T); }

  static Expr unary(Op op, Expr a) {
    if (arity(op) != 1) throw std::invalid_argument("Expr::unary: operator is not unary");
    return Expr(std::make_shared<const Node>(Node{op, {}, Var::X, {std::move(a)}}));
  }
  static Expr binary(Op op, Expr a, Expr b) {
    if (arity(op) != 2) throw std::invalid_argument("Expr::binary: operator is not binary");
    return Expr(std::make_shared<const Node>(Node{op, {}, Var::X, {std::move(a), std::move(b)}}));
  }
  static Expr ifpos(Expr guard, Expr then_branch, Expr else_branch) {
    return Expr(std::make_shared<const Node>(
        Node{Op::IfPos, {}, Var::X, {std::move(guard), std::move(then_branch), std::move(else_branch)}}));
  }

  Op op() const { return node_->op; }
  cplx value() const { return node_->value; }
  Var variable() const { return node_->var; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_const() const { return op() == Op::Const; }
  bool is_const(cplx c) const { return is_const() && value() == c; }
  bool is_zero() const { return is_const(0.0); }
  bool is_one() const { return is_const(1.0); }
  /// Numeric constant with zero imaginary part and integral real part.
  bool is_integer() const {
    if (!is_const() || value().imag() != 0.0) return false;
    const double r = value().real();
    return std::abs(r) < 9.0e15 && r == static_cast<double>(static_cast<long long>(r));
  }
  long long as_integer() const { return static_cast<long long>(value().real()); }

  bool same_node(const Expr& other) const { return node_ == other.node_; }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr leaf(Op op) { return Expr(std::make_shared<const Node>(Node{op, {}, Var::X, {}})); }

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::Add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::Sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::Mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::Div, a, b); }
inline Expr operator-(const Expr& a) { return Expr::unary(Op::Neg, a); }
inline Expr pow(const Expr& a, const Expr& b) { return Expr::binary(Op::Pow, a, b); }
inline Expr exp(const Expr& a) { return Expr::unary(Op::Exp, a); }
inline Expr log(const Expr& a) { return Expr::unary(Op::Log, a); }
inline Expr sin(const Expr& a) { return Expr::unary(Op::Sin, a); }
inline Expr cos(const Expr& a) { return Expr::unary(Op::Cos, a); }
inline Expr tan(const Expr& a) { return Expr::unary(Op::Tan, a); }
inline Expr sqrt(const Expr& a) { return Expr::unary(Op::Sqrt, a); }
inline Expr conj(const Expr& a) { return Expr::unary(Op::Conj, a); }
inline Expr re(const Expr& a) { return Expr::unary(Op::Re, a); }
inline Expr im(const Expr& a) { return Expr::unary(Op::Im, a); }

inline Expr operator+(const Expr& a, double b) { return a + Expr::real(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::real(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::real(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::real(a) - b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::real(b); }
inline Expr operator*(double a, const Expr& b) { return Expr::real(a) * b; }
inline Expr operator/(const Expr& a, double b) { return a / Expr::real(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::real(a) / b; }
inline Expr pow(const Expr& a, double b) { return pow(a, Expr::real(b)); }

/// Total structural order; 0 iff the trees are identical.
inline int compare(const Expr& a, const Expr& b) {
  if (a.same_node(b)) return 0;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  switch (a.op()) {
    case Op::Const: {
      const cplx va = a.value(), vb = b.value();
      if (va.real() != vb.real()) return va.real() < vb.real() ? -1 : 1;
      if (va.imag() != vb.imag()) return va.imag() < vb.imag() ? -1 : 1;
      return 0;
    }
    case Op::Var:
      if (a.variable() != b.variable()) return a.variable() < b.variable() ? -1 : 1;
      return 0;
    default:
      break;
  }
  const auto& xa = a.args();
  const auto& xb = b.args();
  for (std::size_t k = 0; k < xa.size() && k < xb.size(); ++k) {
    if (int c = compare(xa[k], xb[k]); c != 0) return c;
  }
  if (xa.size() != xb.size()) return xa.size() < xb.size() ? -1 : 1;
  return 0;
}

inline bool structurally_equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

inline bool depends_on(const Expr& e, Var v) {
  if (e.op() == Op::Var) return e.variable() == v;
  for (const auto& a : e.args())
    if (depends_on(a, v)) return true;
  return false;
}

inline std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += node_count(a);
  return n;
}

/// Replacement table for substitute(); unset entries leave the variable alone.
struct Substitution {
  std::optional<Expr> x, y, t;

  const std::optional<Expr>& operator[](Var v) const {
    switch (v) {
      case Var::X: return x;
      case Var::Y: return y;
      case Var::T: return t;
    }
    return x;
  }
};

inline Expr rebuild(const Expr& e, std::vector<Expr> args) {
  switch (arity(e.op())) {
    case 0: return e;
    case 1: return Expr::unary(e.op(), std::move(args[0]));
    case 2: return Expr::binary(e.op(), std::move(args[0]), std::move(args[1]));
    default: return Expr::ifpos(std::move(args[0]), std::move(args[1]), std::move(args[2]));
  }
}

inline Expr substitute(const Expr& e, const Substitution& s) {
  if (e.op() == Op::Var) {
    const auto& r = s[e.variable()];
    return r ? *r : e;
  }
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const auto& a : e.args()) {
    args.push_back(substitute(a, s));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? rebuild(e, std::move(args)) : e;
}

inline Expr substitute(const Expr& e, Var v, const Expr& by) {
  Substitution s;
  switch (v) {
    case Var::X: s.x = by; break;
    case Var::Y: s.y = by; break;
    case Var::T: s.t = by; break;
  }
  return substitute(e, s);
}

/// Binds the family parameter t to a concrete real.
inline Expr at_t(const Expr& e, double t) { return substitute(e, Var::T, Expr::real(t)); }

}  // namespace bkc
