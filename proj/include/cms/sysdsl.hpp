#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cms/expr.hpp"
#include "cms/point.hpp"

namespace cms {

// One comparison of the vertex-set predicate language.
struct Comparison {
  enum class Op { LE, GE, LT, GT };
  ExprPtr lhs;
  Op op;
  ExprPtr rhs;
};

// Boolean combination in disjunctive form: an OR over AND-groups ('and'
// binds tighter than 'or'). An empty predicate means the whole space.
struct Predicate {
  std::vector<std::vector<Comparison>> groups;

  bool empty() const { return groups.empty(); }
};

bool eval_predicate(const Predicate& p, std::span<const double> coords);

struct EdgeDecl {
  std::string id;
  int source = 0;
  int target = 0;
  std::vector<ExprPtr> map;  // one component per dimension
  ExprPtr prob;
};

// Parsed system file: pure data, no compiled functions.
struct SystemSpec {
  std::string name;
  int dim = 0;
  Metric metric = Metric::L1;
  int vertices = 0;
  std::vector<Predicate> vertex_sets;                 // per vertex; empty = whole space
  std::vector<std::vector<double>> representatives;   // per vertex
  std::vector<EdgeDecl> edges;
  double delta = 0.0;
  std::optional<double> rate;
};

// Parses the line-oriented system description language.
//
//   system IDENT
//   dim INT
//   metric (l1|l2|linf)
//   vertices INT
//   vertexset INT = comparison {(and|or) comparison}
//   representative INT = (NUM {, NUM})
//   edge ID : INT -> INT map (expr {, expr}) prob expr
//   delta NUM
//   rate NUM
//
// '#' starts a comment. dim, metric and vertices must precede declarations
// that use them. Tokenization and grammar violations raise SyntaxError with
// line and column; structural violations raise SemanticError.
SystemSpec parse_system(const std::string& text);

// Canonical text form; parse(print(parse(s))) equals parse(s).
std::string print_system(const SystemSpec& spec);

bool spec_equal(const SystemSpec& a, const SystemSpec& b);

}  // namespace cms
