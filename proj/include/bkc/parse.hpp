#pragma once

#include <cctype>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bkc/expr.hpp"

namespace bkc {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct ParseOptions {
  /// Value bound to the identifier `k` (integer pre-substitution).
  std::optional<int> k;
  /// Accept `w`, expanded to (x + i*y), for entire functions of w = X + iY.
  bool allow_w = false;
};

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      // exponent only when a digit follows, so "2*e" style input stays unambiguous
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      std::string text(src.substr(start, i - start));
      if (text == ".") throw ParseError("malformed number", start);
      out.push_back({Tok::Number, text, std::strtod(text.c_str(), nullptr), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), 0.0, start});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({kind, std::string(1, c), 0.0, start});
    ++i;
  }
  out.push_back({Tok::End, "", 0.0, src.size()});
  return out;
}

// Pratt parser. Binding powers: + - 10, * / 20, prefix minus 30, ^ 40 (right).
class Parser {
 public:
  Parser(std::string_view src, ParseOptions opts) : toks_(tokenize(src)), opts_(opts) {}

  Expr parse_all() {
    Expr e = parse(0);
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      const std::string found = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      throw ParseError(std::string("expected ") + what + ", found " + found, peek().pos);
    }
    ++pos_;
  }

  static int infix_power(Tok t) {
    switch (t) {
      case Tok::Plus:
      case Tok::Minus: return 10;
      case Tok::Star:
      case Tok::Slash: return 20;
      case Tok::Caret: return 40;
      default: return -1;
    }
  }

  Expr parse(int min_bp) {
    Expr lhs = prefix();
    for (;;) {
      const Tok t = peek().kind;
      const int bp = infix_power(t);
      if (bp < 0 || bp <= min_bp) break;
      next();
      // right associativity for ^: parse the right operand one notch lower
      const Expr rhs = parse(t == Tok::Caret ? bp - 1 : bp);
      switch (t) {
        case Tok::Plus: lhs = lhs + rhs; break;
        case Tok::Minus: lhs = lhs - rhs; break;
        case Tok::Star: lhs = lhs * rhs; break;
        case Tok::Slash: lhs = lhs / rhs; break;
        default: lhs = pow(lhs, rhs); break;
      }
    }
    return lhs;
  }

  Expr prefix() {
    const Token& tok = next();
    switch (tok.kind) {
      case Tok::Number: return Expr::real(tok.number);
      case Tok::Minus: return -parse(30);
      case Tok::Plus: return parse(30);
      case Tok::LParen: {
        Expr e = parse(0);
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: return identifier(tok);
      case Tok::End: throw ParseError("unexpected end of input", tok.pos);
      default: throw ParseError("unexpected '" + tok.text + "'", tok.pos);
    }
  }

  Expr identifier(const Token& tok) {
    const std::string& n = tok.text;
    if (n == "x") return Expr::x();
    if (n == "y") return Expr::y();
    if (n == "t") return Expr::t();
    if (n == "pi") return Expr::pi();
    if (n == "e") return Expr::e();
    if (n == "i") return Expr::i();
    if (n == "k" && opts_.k) return Expr::real(*opts_.k);
    if (n == "w" && opts_.allow_w) return Expr::x() + Expr::i() * Expr::y();

    static constexpr std::pair<const char*, Op> functions[] = {
        {"exp", Op::Exp}, {"log", Op::Log},   {"sin", Op::Sin},   {"cos", Op::Cos},
        {"tan", Op::Tan}, {"sqrt", Op::Sqrt}, {"conj", Op::Conj}, {"re", Op::Re},
        {"im", Op::Im},   {"ifpos", Op::IfPos}};
    for (const auto& [name, op] : functions) {
      if (n != name) continue;
      expect(Tok::LParen, "'(' after function name");
      std::vector<Expr> args;
      args.push_back(parse(0));
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(parse(0));
      }
      expect(Tok::RParen, "')'");
      const std::size_t want = op == Op::IfPos ? 3 : 1;
      if (args.size() != want) {
        throw ParseError(n + " takes " + std::to_string(want) + " argument(s), got " + std::to_string(args.size()),
                         tok.pos);
      }
      if (op == Op::IfPos) return Expr::ifpos(args[0], args[1], args[2]);
      return Expr::unary(op, args[0]);
    }
    throw ParseError("unknown identifier '" + n + "'", tok.pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
};

}  // namespace detail

inline Expr parse_expr(std::string_view text, ParseOptions opts = {}) {
  return detail::Parser(text, opts).parse_all();
}

}  // namespace bkc
