#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "bkc/build.hpp"
#include "bkc/eval.hpp"
#include "bkc/expr.hpp"

namespace bkc {

/// Sign facts the simplifier may rely on (e.g. x > 0 on the right half-plane).
struct Assumptions {
  bool x_positive = false;
  bool y_positive = false;

  static Assumptions right_half_plane() { return {true, false}; }
  static Assumptions upper_half_plane() { return {false, true}; }
};

inline bool is_positive(const Expr& e, const Assumptions& as);

inline bool is_real(const Expr& e, const Assumptions& as = {}) {
  switch (e.op()) {
    case Op::Const: return e.value().imag() == 0.0;
    case Op::Pi:
    case Op::E:
    case Op::Var:
    case Op::Re:
    case Op::Im:
      return true;
    case Op::I: return false;
    case Op::Exp:
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Neg:
    case Op::Conj:
      return is_real(e.arg(0), as);
    case Op::Log:
    case Op::Sqrt:
      return is_positive(e.arg(0), as);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return is_real(e.arg(0), as) && is_real(e.arg(1), as);
    case Op::Pow:
      return (is_positive(e.arg(0), as) && is_real(e.arg(1), as)) || (is_real(e.arg(0), as) && e.arg(1).is_integer());
    case Op::IfPos: return is_real(e.arg(1), as) && is_real(e.arg(2), as);
  }
  return false;
}

inline bool is_positive(const Expr& e, const Assumptions& as) {
  switch (e.op()) {
    case Op::Const: return e.value().imag() == 0.0 && e.value().real() > 0.0;
    case Op::Pi:
    case Op::E:
      return true;
    case Op::Var:
      return (e.variable() == Var::X && as.x_positive) || (e.variable() == Var::Y && as.y_positive);
    case Op::Exp: return is_real(e.arg(0), as);
    case Op::Sqrt: return is_positive(e.arg(0), as);
    case Op::Add:
    case Op::Mul:
    case Op::Div:
      return is_positive(e.arg(0), as) && is_positive(e.arg(1), as);
    case Op::Pow: return is_positive(e.arg(0), as) && is_real(e.arg(1), as);
    case Op::IfPos: return is_positive(e.arg(1), as) && is_positive(e.arg(2), as);
    default: return false;
  }
}

namespace detail {

// Normal form: a sum of terms, each a complex coefficient times a product of
// atom^exponent factors. Factors are sorted by base, terms by factor list.
struct Factor {
  Expr base;
  Expr exponent;
};

struct Term {
  cplx coeff;
  std::vector<Factor> factors;
};

using Poly = std::vector<Term>;

inline int compare_factors(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    if (int c = compare(a[k].base, b[k].base); c != 0) return c;
    if (int c = compare(a[k].exponent, b[k].exponent); c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

inline Expr make_coeff(cplx c) {
  if (c == cplx(0.0, 1.0)) return Expr::i();
  return Expr::constant(c);
}

// Replaces ifpos nodes guarded by `guard` with the branch selected by `truth`.
inline Expr resolve_guard(const Expr& e, const Expr& guard, bool truth) {
  if (e.op() == Op::IfPos && structurally_equal(e.arg(0), guard)) {
    return resolve_guard(e.arg(truth ? 1 : 2), guard, truth);
  }
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  for (const auto& a : e.args()) args.push_back(resolve_guard(a, guard, truth));
  return rebuild(e, std::move(args));
}

// Hoists ifpos to the root so that op(ifpos(g, a, b), c) becomes
// ifpos(g, op(a, c), op(b, c)); branches sharing a guard then combine.
inline Expr lift_ifpos(const Expr& e) {
  if (e.args().empty()) return e;
  if (e.op() == Op::IfPos) {
    const Expr& g = e.arg(0);
    return Expr::ifpos(g, lift_ifpos(resolve_guard(e.arg(1), g, true)), lift_ifpos(resolve_guard(e.arg(2), g, false)));
  }
  std::vector<Expr> args;
  for (const auto& a : e.args()) args.push_back(lift_ifpos(a));
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k].op() != Op::IfPos) continue;
    const Expr g = args[k].arg(0);
    std::vector<Expr> then_args = args, else_args = args;
    then_args[k] = args[k].arg(1);
    else_args[k] = args[k].arg(2);
    return Expr::ifpos(g, lift_ifpos(resolve_guard(rebuild(e, std::move(then_args)), g, true)),
                       lift_ifpos(resolve_guard(rebuild(e, std::move(else_args)), g, false)));
  }
  return rebuild(e, std::move(args));
}

class Simplifier {
 public:
  explicit Simplifier(Assumptions as) : as_(as) {}

  Expr run(const Expr& e) { return to_expr(norm(e)); }

  Poly norm(const Expr& e) {
    switch (e.op()) {
      case Op::Const: return constant(e.value());
      case Op::I: return constant(cplx(0.0, 1.0));
      case Op::Pi:
      case Op::Var:
        return atom(e);
      case Op::E: return make_exp(constant(1.0));
      case Op::Neg: return scale(norm(e.arg(0)), -1.0);
      case Op::Add: return pythagorean(add(norm(e.arg(0)), norm(e.arg(1))));
      case Op::Sub: return pythagorean(add(norm(e.arg(0)), scale(norm(e.arg(1)), -1.0)));
      case Op::Mul: return mul(norm(e.arg(0)), norm(e.arg(1)));
      case Op::Div: return mul(norm(e.arg(0)), power(norm(e.arg(1)), Expr::real(-1.0)));
      case Op::Pow: {
        const Expr p = run(e.arg(1));
        if (e.arg(0).op() == Op::E) return make_exp(norm(p));
        return power(norm(e.arg(0)), p);
      }
      case Op::Sqrt: return power(norm(e.arg(0)), Expr::real(0.5));
      case Op::Exp: return make_exp(norm(e.arg(0)));
      case Op::Log: return make_log(norm(e.arg(0)));
      case Op::IfPos: {
        const Expr g = run(e.arg(0));
        if (g.is_const()) return norm(g.value().real() > 0.0 ? e.arg(1) : e.arg(2));
        if (is_positive(g, as_)) return norm(e.arg(1));
        const Expr a = run(e.arg(1));
        const Expr b = run(e.arg(2));
        if (structurally_equal(a, b)) return norm(a);
        return atom(Expr::ifpos(g, a, b));
      }
      default: break;
    }
    // remaining unary functions: sin cos tan conj re im
    if (e.op() == Op::Conj || e.op() == Op::Re || e.op() == Op::Im) {
      if (auto split = split_real(norm(e.arg(0)), e.op())) return *split;
    }
    const Expr a = run(e.arg(0));
    if (a.is_const()) {
      if (auto folded = fold(Expr::unary(e.op(), a))) return constant(*folded);
    }
    switch (e.op()) {
      case Op::Conj:
      case Op::Re:
        if (is_real(a, as_)) return norm(a);
        break;
      case Op::Im:
        if (is_real(a, as_)) return {};
        break;
      default: break;
    }
    return atom(Expr::unary(e.op(), a));
  }

  Expr to_expr(const Poly& p) const {
    if (p.empty()) return Expr::real(0.0);
    Expr out;
    bool first = true;
    for (const auto& term : p) {
      const bool negative = term.coeff.imag() == 0.0 && term.coeff.real() < 0.0;
      if (first) {
        out = term_expr(term.coeff, term.factors);
        first = false;
      } else if (negative) {
        out = out - term_expr(-term.coeff, term.factors);
      } else {
        out = out + term_expr(term.coeff, term.factors);
      }
    }
    return out;
  }

 private:
  /// conj, re or im applied termwise when every monomial is real.
  std::optional<Poly> split_real(const Poly& p, Op op) const {
    for (const auto& term : p)
      for (const auto& f : term.factors)
        if (!is_real(factor_expr(f, false), as_)) return std::nullopt;
    Poly out;
    for (const auto& term : p) {
      const cplx c = op == Op::Conj ? std::conj(term.coeff) : op == Op::Re ? cplx(term.coeff.real()) : cplx(term.coeff.imag());
      if (c != cplx(0.0)) out.push_back(Term{c, term.factors});
    }
    return out;
  }

  static Poly constant(cplx c) {
    if (c == cplx(0.0)) return {};
    return {Term{c, {}}};
  }

  static Poly atom(const Expr& base, const Expr& exponent = Expr::real(1.0)) {
    return {Term{1.0, {Factor{base, exponent}}}};
  }

  static std::optional<cplx> fold(const Expr& e) {
    try {
      return eval(e, Env{});
    } catch (const EvalError&) {
      return std::nullopt;
    }
  }

  static Poly scale(Poly p, cplx c) {
    if (c == cplx(0.0)) return {};
    for (auto& t : p) t.coeff *= c;
    return p;
  }

  static Poly add(const Poly& a, const Poly& b) {
    Poly out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      int c;
      if (i == a.size()) c = 1;
      else if (j == b.size()) c = -1;
      else c = compare_factors(a[i].factors, b[j].factors);
      if (c < 0) {
        out.push_back(a[i++]);
      } else if (c > 0) {
        out.push_back(b[j++]);
      } else {
        Term t = a[i++];
        t.coeff += b[j++].coeff;
        if (t.coeff != cplx(0.0)) out.push_back(std::move(t));
      }
    }
    return out;
  }

  // c M sin(a)^2 + c M cos(a)^2 -> c M
  static Poly pythagorean(Poly p) {
    const auto squared = [](const Factor& f, Op op) {
      return f.base.op() == op && f.exponent.is_integer() && f.exponent.as_integer() >= 2;
    };
    const auto reduced = [](const std::vector<Factor>& fs, std::size_t at) {
      std::vector<Factor> out = fs;
      const long n = out[at].exponent.as_integer() - 2;
      if (n == 0) out.erase(out.begin() + static_cast<long>(at));
      else out[at].exponent = Expr::real(static_cast<double>(n));
      return out;
    };
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < p.size() && !changed; ++i)
        for (std::size_t fi = 0; fi < p[i].factors.size() && !changed; ++fi) {
          if (!squared(p[i].factors[fi], Op::Sin)) continue;
          const Expr& arg = p[i].factors[fi].base.arg(0);
          const auto rest = reduced(p[i].factors, fi);
          for (std::size_t j = 0; j < p.size() && !changed; ++j) {
            if (j == i || p[j].coeff != p[i].coeff) continue;
            for (std::size_t fj = 0; fj < p[j].factors.size(); ++fj) {
              const Factor& g = p[j].factors[fj];
              if (!squared(g, Op::Cos) || !structurally_equal(g.base.arg(0), arg)) continue;
              if (compare_factors(rest, reduced(p[j].factors, fj)) != 0) continue;
              Poly merged{Term{p[i].coeff, rest}};
              Poly others;
              for (std::size_t k = 0; k < p.size(); ++k)
                if (k != i && k != j) others.push_back(p[k]);
              p = add(others, merged);
              changed = true;
              break;
            }
          }
        }
    }
    return p;
  }

  Expr add_exponents(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr::constant(a.value() + b.value());
    return to_expr(add(norm(a), norm(b)));
  }

  Expr mul_exponents(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr::constant(a.value() * b.value());
    return to_expr(mul(norm(a), norm(b)));
  }

  // Multiplies two terms; the result may be a sum when merged exponentials
  // re-expand.
  Poly mul_terms(const Term& a, const Term& b) {
    Poly p = mul_terms_plain(a, b);
    if (p.empty()) return p;
    return merge_exponentials(std::move(p.front()));
  }

  // exp(a)^m * exp(b)^n -> exp(m a + n b) for integer m, n.
  Poly merge_exponentials(Term t) {
    int count = 0;
    bool nontrivial = false;
    for (const auto& f : t.factors) {
      if (f.base.op() == Op::Exp && f.exponent.is_integer()) {
        ++count;
        nontrivial = nontrivial || !f.exponent.is_one();
      }
    }
    if (count == 0 || (count == 1 && !nontrivial)) return {std::move(t)};

    Term rest{t.coeff, {}};
    Poly exponent;
    for (const auto& f : t.factors) {
      if (f.base.op() == Op::Exp && f.exponent.is_integer()) {
        exponent = add(exponent, scale(norm(f.base.arg(0)), f.exponent.value()));
      } else {
        rest.factors.push_back(f);
      }
    }
    Poly out;
    for (const auto& term : make_exp(exponent)) out = add(out, mul_terms_plain(rest, term));
    return out;
  }

  // Factor merge without the exponential pass; make_exp output already has a
  // single exp factor, so re-merging would only recurse.
  Poly mul_terms_plain(const Term& a, const Term& b) {
    Term out{a.coeff * b.coeff, {}};
    if (out.coeff == cplx(0.0)) return {};
    std::size_t i = 0, j = 0;
    const auto& fa = a.factors;
    const auto& fb = b.factors;
    while (i < fa.size() || j < fb.size()) {
      int c;
      if (i == fa.size()) c = 1;
      else if (j == fb.size()) c = -1;
      else c = compare(fa[i].base, fb[j].base);
      if (c < 0) {
        out.factors.push_back(fa[i++]);
      } else if (c > 0) {
        out.factors.push_back(fb[j++]);
      } else {
        Expr ex = add_exponents(fa[i].exponent, fb[j].exponent);
        if (!ex.is_zero()) out.factors.push_back(Factor{fa[i].base, ex});
        ++i;
        ++j;
      }
    }
    return {std::move(out)};
  }

  static constexpr std::size_t kExpandLimit = 64;

  Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() * b.size() > kExpandLimit) {
      // too large to distribute; keep the right operand as an opaque factor
      return mul(a, atom(to_expr(b)));
    }
    Poly out;
    for (const auto& ta : a)
      for (const auto& tb : b) out = add(out, mul_terms(ta, tb));
    return out;
  }

  bool distributable(const Term& t, const Expr& p) const {
    if (!is_real(p, as_)) return false;
    if (!(t.coeff.imag() == 0.0 && t.coeff.real() > 0.0)) return false;
    for (const auto& f : t.factors) {
      if (!is_positive(f.base, as_) || !is_real(f.exponent, as_)) return false;
    }
    return true;
  }

  Poly power(const Poly& base, const Expr& p) {
    if (p.is_zero()) return constant(1.0);
    if (p.is_one()) return base;
    if (base.empty()) {
      if (p.is_const() && p.value().real() > 0.0) return {};
      return atom(Expr::real(0.0), p);
    }
    if (base.size() == 1) {
      const Term& t = base.front();
      if (t.factors.empty() && p.is_const()) {
        if (auto v = fold(bkc::pow(Expr::constant(t.coeff), p))) return constant(*v);
      }
      // exp(a)^p = exp(p a) whenever a is real
      if (t.coeff == cplx(1.0) && t.factors.size() == 1 && t.factors[0].base.op() == Op::Exp &&
          t.factors[0].exponent.is_one() && is_real(t.factors[0].base.arg(0), as_) && is_real(p, as_)) {
        return make_exp(mul(norm(t.factors[0].base.arg(0)), norm(p)));
      }
      if (p.is_integer() || distributable(t, p)) {
        Term out{1.0, {}};
        if (p.is_const()) {
          out.coeff = checked_pow(t.coeff, p.value(), p);
        } else if (t.coeff != cplx(1.0)) {
          out.factors.push_back(Factor{Expr::constant(t.coeff), p});
        }
        Poly result{out};
        for (const auto& f : t.factors) {
          Expr ex = mul_exponents(f.exponent, p);
          if (ex.is_zero()) continue;
          result = mul(result, {Term{1.0, {Factor{f.base, ex}}}});
        }
        return result;
      }
      if (t.coeff == cplx(1.0) && t.factors.size() == 1 && t.factors[0].exponent.is_one()) {
        return atom(t.factors[0].base, p);
      }
      return atom(to_expr(base), p);
    }
    if (p.is_integer() && p.as_integer() > 1 && p.as_integer() <= 6) {
      std::size_t projected = 1;
      for (long long k = 0; k < p.as_integer(); ++k) projected *= base.size();
      if (projected <= kExpandLimit * 4) {
        Poly out = base;
        for (long long k = 1; k < p.as_integer(); ++k) out = mul(out, base);
        return out;
      }
    }
    return atom(to_expr(base), p);
  }

  // exp(c + sum n_j log f_j + rest) = e^c * prod f_j^n_j * exp(rest)
  Poly make_exp(const Poly& arg) {
    cplx c = 1.0;
    Poly rest;
    Poly extracted = constant(1.0);
    for (const auto& term : arg) {
      if (term.factors.empty()) {
        c *= std::exp(term.coeff);
        continue;
      }
      if (term.factors.size() == 1 && term.factors[0].exponent.is_one() && term.factors[0].base.op() == Op::Log &&
          term.factors[0].base.arg(0).op() != Op::Exp) {
        // principal branch: exp(n Log f) is f^n by definition
        extracted = mul(extracted, power(norm(term.factors[0].base.arg(0)), make_coeff(term.coeff)));
        continue;
      }
      rest.push_back(term);
    }
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return atom(Expr::unary(Op::Exp, to_expr(arg)));
    Poly out = scale(extracted, c);
    if (!rest.empty()) out = mul_plain(out, atom(Expr::unary(Op::Exp, to_expr(rest))));
    return out;
  }

  Poly mul_plain(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& ta : a)
      for (const auto& tb : b) out = add(out, mul_terms_plain(ta, tb));
    return out;
  }

  Poly make_log(const Poly& arg) {
    if (arg.empty()) return atom(Expr::unary(Op::Log, Expr::real(0.0)));
    if (arg.size() == 1) {
      const Term& t = arg.front();
      if (t.factors.empty()) {
        if (auto v = fold(Expr::unary(Op::Log, Expr::constant(t.coeff)))) return constant(*v);
      }
      // log(exp(a)) = a for real a
      if (t.coeff == cplx(1.0) && t.factors.size() == 1 && t.factors[0].exponent.is_one() &&
          t.factors[0].base.op() == Op::Exp && is_real(t.factors[0].base.arg(0), as_)) {
        return norm(t.factors[0].base.arg(0));
      }
      // log(c prod f^e) = log c + sum e log f when everything is positive
      if (t.coeff.imag() == 0.0 && t.coeff.real() > 0.0 && !(t.factors.size() == 1 && t.factors[0].exponent.is_one())) {
        bool ok = true;
        for (const auto& f : t.factors) ok = ok && is_positive(f.base, as_) && is_real(f.exponent, as_);
        if (ok) {
          Poly out = constant(std::log(t.coeff.real()));
          for (const auto& f : t.factors) out = add(out, mul(norm(f.exponent), make_log(atom(f.base))));
          return out;
        }
      }
    }
    return atom(Expr::unary(Op::Log, to_expr(arg)));
  }

  Expr factor_expr(const Factor& f, bool invert) const {
    Expr ex = invert ? Expr::constant(-f.exponent.value()) : f.exponent;
    if (ex.is_one()) return f.base;
    return bkc::pow(f.base, ex);
  }

  Expr term_expr(cplx coeff, const std::vector<Factor>& factors) const {
    std::vector<Expr> num, den;
    for (const auto& f : factors) {
      const bool negative = f.exponent.is_const() && f.exponent.value().imag() == 0.0 && f.exponent.value().real() < 0;
      (negative ? den : num).push_back(factor_expr(f, negative));
    }
    Expr out;
    bool have = false;
    if (coeff != cplx(1.0) || num.empty()) {
      if (coeff == cplx(-1.0) && !num.empty()) {
        Expr prod = num[0];
        for (std::size_t k = 1; k < num.size(); ++k) prod = prod * num[k];
        out = -prod;
        num.clear();
      } else {
        out = make_coeff(coeff);
      }
      have = true;
    }
    for (const auto& f : num) {
      out = have ? out * f : f;
      have = true;
    }
    if (!den.empty()) {
      Expr d = den[0];
      for (std::size_t k = 1; k < den.size(); ++k) d = d * den[k];
      out = out / d;
    }
    return out;
  }

  Assumptions as_;
};

}  // namespace detail

/// Terminating rewrite to a sum-of-products normal form: constant folding,
/// 0/1 absorption, like-term collection, power collection, exp/log
/// cancellation where the assumptions make it valid.
inline Expr simplify(const Expr& e, Assumptions as = {}) {
  return detail::Simplifier(as).run(detail::lift_ifpos(e));
}

/// True when the expression simplifies to the literal 0.
inline bool simplifies_to_zero(const Expr& e, Assumptions as = {}) { return simplify(e, as).is_zero(); }

}  // namespace bkc
