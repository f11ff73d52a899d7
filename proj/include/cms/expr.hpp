#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cms {

// Arithmetic expression over the coordinates x1..xd (aliases x, y, z for
// d <= 3). Trees are immutable and shared; evaluation order is fixed
// left-to-right with no reassociation, so results are bit-reproducible.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind;
  double number = 0.0;               // Number
  int var = 0;                       // Var: 0-based coordinate index
  int exponent = 0;                  // Pow: nonnegative integer
  std::string func;                  // Call
  ExprPtr a, b;                      // operands (a only for Neg/Pow)
  std::vector<ExprPtr> args;         // Call arguments
};

ExprPtr make_number(double v);
ExprPtr make_var(int index);
ExprPtr make_unary_neg(ExprPtr a);
ExprPtr make_binary(Expr::Kind op, ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr base, int exponent);
ExprPtr make_call(std::string func, std::vector<ExprPtr> args);

// Evaluates with the given coordinate values. Throws DomainError when log is
// applied to a nonpositive value. A quotient of two integer literals is a
// single double division, never a pre-rounded constant.
double eval_expr(const Expr& e, std::span<const double> coords);

// Canonical fully parenthesized form; parse(print(parse(s))) == parse(s).
std::string print_expr(const Expr& e);

bool expr_equal(const Expr& a, const Expr& b);

// Largest coordinate index mentioned, plus one; 0 for constant expressions.
int expr_max_var(const Expr& e);

// Parses a standalone expression (the same grammar the system DSL uses for
// map components and probabilities). dim bounds the coordinate variables.
ExprPtr parse_expr_text(const std::string& text, int dim);

}  // namespace cms
