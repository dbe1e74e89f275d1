#include "contactq/parser.hpp"

#include <cctype>
#include <limits>

#include "contactq/errors.hpp"

namespace contactq {

namespace {

enum class Tok { End, Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen };

const char* describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (off_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[off_]))) ++off_;
    current_ = Token{Tok::End, "", off_};
    if (off_ >= src_.size()) return;
    char c = src_[off_];
    auto single = [&](Tok k) {
      current_.kind = k;
      current_.text = std::string(1, c);
      ++off_;
    };
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = off_;
      bool dot = false;
      while (off_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[off_])) || (src_[off_] == '.' && !dot))) {
        dot = dot || src_[off_] == '.';
        ++off_;
      }
      current_.kind = Tok::Number;
      current_.text = std::string(src_.substr(start, off_ - start));
      if (current_.text == ".") throw SyntaxError("malformed number, expected digits", start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = off_;
      while (off_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[off_])) || src_[off_] == '_'))
        ++off_;
      current_.kind = Tok::Ident;
      current_.text = std::string(src_.substr(start, off_ - start));
      return;
    }
    switch (c) {
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '/': return single(Tok::Slash);
      case '^': return single(Tok::Caret);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      default: throw SyntaxError(std::string("unexpected character '") + c + "'", off_);
    }
  }

  std::string_view src_;
  std::size_t off_ = 0;
  Token current_;
};

mpq_class number_value(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return mpq_class(mpz_class(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty()) digits = "0";
  mpz_class den = 1;
  for (std::size_t k = dot + 1; k < text.size(); ++k) den *= 10;
  mpq_class q(mpz_class(digits), den);
  q.canonicalize();
  return q;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    expect(Tok::End);
    return e;
  }

 private:
  static ExprPtr make(Expr::Literal n, std::size_t pos) {
    return std::make_unique<Expr>(Expr{std::move(n), pos});
  }

  Token expect(Tok k) {
    if (lex_.peek().kind != k)
      throw SyntaxError(std::string("expected ") + describe(k) + " but found " + describe(lex_.peek().kind),
                        lex_.peek().pos);
    return lex_.take();
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      Token op = lex_.take();
      ExprPtr rhs = term();
      lhs = std::make_unique<Expr>(Expr{Expr::Binary{op.text[0], std::move(lhs), std::move(rhs)}, op.pos});
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
      Token op = lex_.take();
      ExprPtr rhs = factor();
      lhs = std::make_unique<Expr>(Expr{Expr::Binary{op.text[0], std::move(lhs), std::move(rhs)}, op.pos});
    }
    return lhs;
  }

  ExprPtr factor() {
    if (lex_.peek().kind == Tok::Minus) {
      Token op = lex_.take();
      return std::make_unique<Expr>(Expr{Expr::Negate{factor()}, op.pos});
    }
    ExprPtr b = base();
    if (lex_.peek().kind == Tok::Caret) {
      Token op = lex_.take();
      long e = exponent();
      b = std::make_unique<Expr>(Expr{Expr::Power{std::move(b), e}, op.pos});
    }
    return b;
  }

  long exponent() {
    bool paren = false;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      paren = true;
    }
    bool neg = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      neg = true;
    }
    Token n = expect(Tok::Number);
    if (n.text.find('.') != std::string::npos) throw SyntaxError("exponent must be an integer", n.pos);
    mpz_class v(n.text);
    if (!v.fits_slong_p() || v > 1000000) throw SyntaxError("exponent too large", n.pos);
    if (paren) expect(Tok::RParen);
    return neg ? -v.get_si() : v.get_si();
  }

  ExprPtr base() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        Token n = lex_.take();
        return make(Expr::Literal{number_value(n.text)}, n.pos);
      }
      case Tok::Ident: {
        Token id = lex_.take();
        if (id.text == "i") return std::make_unique<Expr>(Expr{Expr::ImaginaryUnit{}, id.pos});
        return std::make_unique<Expr>(Expr{Expr::Variable{id.text}, id.pos});
      }
      case Tok::LParen: {
        lex_.take();
        ExprPtr e = expr();
        expect(Tok::RParen);
        return e;
      }
      default:
        throw SyntaxError(std::string("expected number, identifier or '(' but found ") + describe(t.kind), t.pos);
    }
  }

  Lexer lex_;
};

// Inverse of a monomial c * w^k; nullopt if s is not of that shape.
std::optional<Symbol> invert_w_monomial(const Symbol& s) {
  if (s.size() != 1) return std::nullopt;
  const auto& [e, c] = *s.terms().begin();
  auto w = s.registry().laurent_slot();
  for (std::size_t k = 0; k < e.size(); ++k)
    if (e[k] != 0 && (!w || k != *w)) return std::nullopt;
  Exponents inv(e.size(), 0);
  if (w) inv[*w] = -e[*w];
  return Symbol::monomial(s.registry_ptr(), inv, GaussianRational(1) / c);
}

struct Evaluator {
  const RegistryPtr& reg;

  Symbol operator()(const Expr& e) const {
    return std::visit([&](const auto& n) { return eval(n, e.position); }, e.node);
  }

  Symbol eval(const Expr::Literal& n, std::size_t) const { return Symbol(reg, GaussianRational(n.value)); }
  Symbol eval(const Expr::ImaginaryUnit&, std::size_t) const { return Symbol(reg, GaussianRational::i()); }
  Symbol eval(const Expr::Variable& n, std::size_t pos) const {
    if (!reg->contains(n.name))
      throw UnknownVariable("unknown variable '" + n.name + "' at position " + std::to_string(pos));
    return Symbol::variable(reg, n.name);
  }
  Symbol eval(const Expr::Negate& n, std::size_t) const { return -(*this)(*n.operand); }
  Symbol eval(const Expr::Binary& b, std::size_t pos) const {
    Symbol l = (*this)(*b.lhs);
    Symbol r = (*this)(*b.rhs);
    switch (b.op) {
      case '+': return l + r;
      case '-': return l - r;
      case '*': return l * r;
      default: {
        if (!r.is_constant()) throw DivisionByNonLiteral("division by a non-constant expression", pos);
        if (r.is_zero()) throw DivisionByNonLiteral("division by zero", pos);
        return l * (GaussianRational(1) / r.constant_term());
      }
    }
  }
  Symbol eval(const Expr::Power& p, std::size_t pos) const {
    Symbol b = (*this)(*p.base);
    if (p.exponent >= 0) return b.pow(static_cast<unsigned>(p.exponent));
    auto inv = invert_w_monomial(b);
    if (!inv) throw NegativeExponent("negative exponent is only allowed on powers of w", pos);
    return inv->pow(static_cast<unsigned>(-p.exponent));
  }
};

}  // namespace

ExprPtr parse_tree(std::string_view text) { return Parser(text).parse(); }

Symbol evaluate(const Expr& e, const RegistryPtr& registry) { return Evaluator{registry}(e); }

Symbol parse_expr(std::string_view text, const RegistryPtr& registry) {
  return evaluate(*parse_tree(text), registry);
}

}  // namespace contactq
