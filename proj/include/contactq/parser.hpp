#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "contactq/symbol.hpp"

namespace contactq {

// Grammar (precedence low to high):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' exponent)?
//   base   := rational | ident | '(' expr ')'
//   exponent := uint | '-' uint | '(' '-'? uint ')'
// The identifier 'i' is the imaginary unit. Division is only by constants;
// negative exponents only on powers of w.

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  struct Literal {
    mpq_class value;
  };
  struct ImaginaryUnit {};
  struct Variable {
    std::string name;
  };
  struct Binary {
    char op;  // '+', '-', '*', '/'
    ExprPtr lhs, rhs;
  };
  struct Power {
    ExprPtr base;
    long exponent;
  };
  struct Negate {
    ExprPtr operand;
  };

  std::variant<Literal, ImaginaryUnit, Variable, Binary, Power, Negate> node;
  std::size_t position = 0;
};

/// Syntax only; identifiers are not resolved. Throws SyntaxError.
ExprPtr parse_tree(std::string_view text);

/// Evaluates a parse tree over a registry. Throws UnknownVariable,
/// NegativeExponent, DivisionByNonLiteral.
Symbol evaluate(const Expr& e, const RegistryPtr& registry);

/// parse_tree + evaluate.
Symbol parse_expr(std::string_view text, const RegistryPtr& registry);

}  // namespace contactq
