#include "cms/expr.hpp"

#include <cmath>
#include <cstdio>

#include "cms/errors.hpp"
#include "expr_parse.hpp"
#include "lexer.hpp"

namespace cms {

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = v;
  return e;
}

ExprPtr make_var(int index) {
  if (index < 0) throw InvalidParams("negative variable index");
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->var = index;
  return e;
}

ExprPtr make_unary_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Neg;
  e->a = std::move(a);
  return e;
}

ExprPtr make_binary(Expr::Kind op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr make_pow(ExprPtr base, int exponent) {
  if (exponent < 0) throw InvalidParams("negative exponent");
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pow;
  e->a = std::move(base);
  e->exponent = exponent;
  return e;
}

ExprPtr make_call(std::string func, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Call;
  e->func = std::move(func);
  e->args = std::move(args);
  return e;
}

double eval_expr(const Expr& e, std::span<const double> coords) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number;
    case Expr::Kind::Var:
      return coords[static_cast<std::size_t>(e.var)];
    case Expr::Kind::Neg:
      return -eval_expr(*e.a, coords);
    case Expr::Kind::Add:
      return eval_expr(*e.a, coords) + eval_expr(*e.b, coords);
    case Expr::Kind::Sub:
      return eval_expr(*e.a, coords) - eval_expr(*e.b, coords);
    case Expr::Kind::Mul:
      return eval_expr(*e.a, coords) * eval_expr(*e.b, coords);
    case Expr::Kind::Div:
      return eval_expr(*e.a, coords) / eval_expr(*e.b, coords);
    case Expr::Kind::Pow: {
      // Integer powers expand to sequential multiplication; the rounding
      // sequence is part of the contract.
      double base = eval_expr(*e.a, coords);
      double r = 1.0;
      for (int i = 0; i < e.exponent; ++i) r *= base;
      return r;
    }
    case Expr::Kind::Call: {
      if (e.func == "sin") return std::sin(eval_expr(*e.args[0], coords));
      if (e.func == "cos") return std::cos(eval_expr(*e.args[0], coords));
      if (e.func == "exp") return std::exp(eval_expr(*e.args[0], coords));
      if (e.func == "log") {
        double v = eval_expr(*e.args[0], coords);
        if (!(v > 0.0)) throw DomainError("log of nonpositive value");
        return std::log(v);
      }
      if (e.func == "abs") return std::fabs(eval_expr(*e.args[0], coords));
      if (e.func == "min") {
        double v = eval_expr(*e.args[0], coords);
        for (std::size_t i = 1; i < e.args.size(); ++i)
          v = std::fmin(v, eval_expr(*e.args[i], coords));
        return v;
      }
      if (e.func == "max") {
        double v = eval_expr(*e.args[0], coords);
        for (std::size_t i = 1; i < e.args.size(); ++i)
          v = std::fmax(v, eval_expr(*e.args[i], coords));
        return v;
      }
      if (e.func == "norm1") {
        double v = 0.0;
        for (const auto& a : e.args) v += std::fabs(eval_expr(*a, coords));
        return v;
      }
      if (e.func == "norm2") {
        double v = 0.0;
        for (const auto& a : e.args) {
          double t = eval_expr(*a, coords);
          v += t * t;
        }
        return std::sqrt(v);
      }
      throw InvalidParams("unknown function '" + e.func + "'");
    }
  }
  throw InvalidParams("corrupt expression node");
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return format_number(e.number);
    case Expr::Kind::Var:
      return "x" + std::to_string(e.var + 1);
    case Expr::Kind::Neg:
      return "(- " + print_expr(*e.a) + ")";
    case Expr::Kind::Add:
      return "(" + print_expr(*e.a) + " + " + print_expr(*e.b) + ")";
    case Expr::Kind::Sub:
      return "(" + print_expr(*e.a) + " - " + print_expr(*e.b) + ")";
    case Expr::Kind::Mul:
      return "(" + print_expr(*e.a) + " * " + print_expr(*e.b) + ")";
    case Expr::Kind::Div:
      return "(" + print_expr(*e.a) + " / " + print_expr(*e.b) + ")";
    case Expr::Kind::Pow:
      return "(" + print_expr(*e.a) + " ^ " + std::to_string(e.exponent) + ")";
    case Expr::Kind::Call: {
      std::string s = e.func + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ", ";
        s += print_expr(*e.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number:
      // Bit comparison: canonical text keeps the exact double.
      return a.number == b.number || (a.number != a.number && b.number != b.number);
    case Expr::Kind::Var:
      return a.var == b.var;
    case Expr::Kind::Neg:
      return expr_equal(*a.a, *b.a);
    case Expr::Kind::Pow:
      return a.exponent == b.exponent && expr_equal(*a.a, *b.a);
    case Expr::Kind::Call: {
      if (a.func != b.func || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!expr_equal(*a.args[i], *b.args[i])) return false;
      return true;
    }
    default:
      return expr_equal(*a.a, *b.a) && expr_equal(*a.b, *b.b);
  }
}

int expr_max_var(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return 0;
    case Expr::Kind::Var:
      return e.var + 1;
    case Expr::Kind::Neg:
    case Expr::Kind::Pow:
      return expr_max_var(*e.a);
    case Expr::Kind::Call: {
      int m = 0;
      for (const auto& a : e.args) m = std::max(m, expr_max_var(*a));
      return m;
    }
    default:
      return std::max(expr_max_var(*e.a), expr_max_var(*e.b));
  }
}

namespace detail {

namespace {

bool is_function_name(const std::string& s) {
  return s == "sin" || s == "cos" || s == "exp" || s == "log" || s == "abs" || s == "min" ||
         s == "max" || s == "norm1" || s == "norm2";
}

// Returns the 0-based coordinate index for a variable name, or -1.
int variable_index(const std::string& s, int dim) {
  if (dim <= 3) {
    if (s == "x" && dim >= 1) return 0;
    if (s == "y" && dim >= 2) return 1;
    if (s == "z" && dim >= 3) return 2;
  }
  if (s.size() >= 2 && s[0] == 'x') {
    int idx = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return -1;
      idx = idx * 10 + (s[i] - '0');
      if (idx > 1000) return -1;
    }
    if (idx >= 1 && idx <= dim) return idx - 1;
  }
  return -1;
}

ExprPtr parse_unary(TokenStream& ts, int dim);

ExprPtr parse_atom(TokenStream& ts, int dim) {
  const Token& t = ts.peek();
  if (t.type == Token::Type::Number) {
    ts.get();
    return make_number(t.number);
  }
  if (t.type == Token::Type::Ident) {
    std::string name = t.text;
    if (is_function_name(name)) {
      ts.get();
      ts.expect_symbol("(");
      std::vector<ExprPtr> args;
      args.push_back(parse_expression(ts, dim));
      while (ts.accept_symbol(",")) args.push_back(parse_expression(ts, dim));
      ts.expect_symbol(")");
      bool unary = name == "sin" || name == "cos" || name == "exp" || name == "log" ||
                   name == "abs";
      if (unary && args.size() != 1) ts.fail("'" + name + "' takes one argument");
      if ((name == "min" || name == "max") && args.size() < 2)
        ts.fail("'" + name + "' takes at least two arguments");
      return make_call(name, std::move(args));
    }
    int idx = variable_index(name, dim);
    if (idx < 0) ts.fail("unknown variable '" + name + "'");
    ts.get();
    return make_var(idx);
  }
  if (ts.accept_symbol("(")) {
    ExprPtr e = parse_expression(ts, dim);
    ts.expect_symbol(")");
    return e;
  }
  ts.fail("expected a number, variable, function, or '('");
}

ExprPtr parse_power(TokenStream& ts, int dim) {
  ExprPtr base = parse_atom(ts, dim);
  if (ts.accept_symbol("^")) {
    const Token& t = ts.peek();
    if (t.type != Token::Type::Number || !t.is_int)
      ts.fail("exponent must be a nonnegative integer constant");
    ts.get();
    return make_pow(std::move(base), static_cast<int>(t.number));
  }
  return base;
}

ExprPtr parse_unary(TokenStream& ts, int dim) {
  if (ts.accept_symbol("-")) return make_unary_neg(parse_unary(ts, dim));
  return parse_power(ts, dim);
}

ExprPtr parse_term(TokenStream& ts, int dim) {
  ExprPtr e = parse_unary(ts, dim);
  for (;;) {
    if (ts.accept_symbol("*"))
      e = make_binary(Expr::Kind::Mul, std::move(e), parse_unary(ts, dim));
    else if (ts.accept_symbol("/"))
      e = make_binary(Expr::Kind::Div, std::move(e), parse_unary(ts, dim));
    else
      return e;
  }
}

}  // namespace

ExprPtr parse_expression(TokenStream& ts, int dim) {
  ExprPtr e = parse_term(ts, dim);
  for (;;) {
    if (ts.accept_symbol("+"))
      e = make_binary(Expr::Kind::Add, std::move(e), parse_term(ts, dim));
    else if (ts.accept_symbol("-"))
      e = make_binary(Expr::Kind::Sub, std::move(e), parse_term(ts, dim));
    else
      return e;
  }
}

}  // namespace detail

ExprPtr parse_expr_text(const std::string& text, int dim) {
  if (dim < 1) throw InvalidParams("expression dimension must be positive");
  detail::TokenStream ts(detail::tokenize(text));
  while (ts.accept_symbol("\n")) {
  }
  ExprPtr e = detail::parse_expression(ts, dim);
  while (ts.accept_symbol("\n")) {
  }
  if (!ts.at_end()) ts.fail("trailing input after expression");
  return e;
}

}  // namespace cms
