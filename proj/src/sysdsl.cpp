#include "cms/sysdsl.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "cms/errors.hpp"
#include "expr_parse.hpp"
#include "lexer.hpp"

namespace cms {

using detail::Token;
using detail::TokenStream;

bool eval_predicate(const Predicate& p, std::span<const double> coords) {
  if (p.groups.empty()) return true;  // whole space
  for (const auto& group : p.groups) {
    bool all = true;
    for (const Comparison& c : group) {
      double l = eval_expr(*c.lhs, coords), r = eval_expr(*c.rhs, coords);
      bool ok = false;
      switch (c.op) {
        case Comparison::Op::LE: ok = l <= r; break;
        case Comparison::Op::GE: ok = l >= r; break;
        case Comparison::Op::LT: ok = l < r; break;
        case Comparison::Op::GT: ok = l > r; break;
      }
      if (!ok) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

namespace {

int expect_int(TokenStream& ts, const std::string& what) {
  const Token& t = ts.peek();
  if (t.type != Token::Type::Number || !t.is_int) ts.fail("expected " + what);
  ts.get();
  return static_cast<int>(t.number);
}

double expect_signed_number(TokenStream& ts, const std::string& what) {
  bool neg = ts.accept_symbol("-");
  const Token& t = ts.peek();
  if (t.type != Token::Type::Number) ts.fail("expected " + what);
  ts.get();
  return neg ? -t.number : t.number;
}

std::string expect_edge_id(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.type == Token::Type::Ident || (t.type == Token::Type::Number && t.is_int)) {
    ts.get();
    return t.text;
  }
  ts.fail("expected an edge id");
}

void expect_decl_end(TokenStream& ts) {
  if (ts.at_end() || ts.accept_symbol("\n")) return;
  ts.fail("expected end of declaration");
}

Comparison::Op parse_cmp_op(TokenStream& ts) {
  if (ts.accept_symbol("<=")) return Comparison::Op::LE;
  if (ts.accept_symbol(">=")) return Comparison::Op::GE;
  if (ts.accept_symbol("<")) return Comparison::Op::LT;
  if (ts.accept_symbol(">")) return Comparison::Op::GT;
  ts.fail("expected a comparison operator");
}

Predicate parse_predicate(TokenStream& ts, int dim) {
  Predicate p;
  p.groups.emplace_back();
  for (;;) {
    Comparison c;
    c.lhs = detail::parse_expression(ts, dim);
    c.op = parse_cmp_op(ts);
    c.rhs = detail::parse_expression(ts, dim);
    p.groups.back().push_back(std::move(c));
    if (ts.peek().type == Token::Type::Ident && ts.peek().text == "and") {
      ts.get();
      continue;
    }
    if (ts.peek().type == Token::Type::Ident && ts.peek().text == "or") {
      ts.get();
      p.groups.emplace_back();
      continue;
    }
    return p;
  }
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw SemanticError(msg);
}

}  // namespace

SystemSpec parse_system(const std::string& text) {
  TokenStream ts(detail::tokenize(text));
  SystemSpec spec;
  bool have_name = false, have_dim = false, have_metric = false, have_vertices = false,
       have_delta = false;
  std::set<int> seen_vertexsets, seen_reps;

  auto need_frame = [&](const char* decl) {
    require(have_dim, std::string(decl) + " requires dim to be declared first");
    require(have_vertices, std::string(decl) + " requires vertices to be declared first");
  };

  while (!ts.at_end()) {
    if (ts.accept_symbol("\n")) continue;
    const Token& head = ts.peek();
    if (head.type != Token::Type::Ident) ts.fail("expected a declaration keyword");
    std::string kw = head.text;
    ts.get();

    if (kw == "system") {
      require(!have_name, "duplicate system header");
      const Token& t = ts.peek();
      if (t.type != Token::Type::Ident) ts.fail("expected a system name");
      ts.get();
      spec.name = t.text;
      have_name = true;
      expect_decl_end(ts);
      continue;
    }
    require(have_name, "file must start with a system header");

    if (kw == "dim") {
      require(!have_dim, "duplicate dim declaration");
      spec.dim = expect_int(ts, "a positive integer dimension");
      require(spec.dim >= 1 && spec.dim <= 16, "dim must be between 1 and 16");
      have_dim = true;
      expect_decl_end(ts);
    } else if (kw == "metric") {
      require(!have_metric, "duplicate metric declaration");
      const Token& t = ts.peek();
      if (t.type != Token::Type::Ident) ts.fail("expected l1, l2, or linf");
      ts.get();
      if (t.text == "l1")
        spec.metric = Metric::L1;
      else if (t.text == "l2")
        spec.metric = Metric::L2;
      else if (t.text == "linf")
        spec.metric = Metric::Linf;
      else
        ts.fail("expected l1, l2, or linf");
      have_metric = true;
      expect_decl_end(ts);
    } else if (kw == "vertices") {
      require(!have_vertices, "duplicate vertices declaration");
      spec.vertices = expect_int(ts, "a positive vertex count");
      require(spec.vertices >= 1, "vertices must be positive");
      spec.vertex_sets.assign(static_cast<std::size_t>(spec.vertices), Predicate{});
      spec.representatives.assign(static_cast<std::size_t>(spec.vertices), {});
      have_vertices = true;
      expect_decl_end(ts);
    } else if (kw == "vertexset") {
      need_frame("vertexset");
      int v = expect_int(ts, "a vertex index");
      require(v >= 1 && v <= spec.vertices,
              "vertexset index " + std::to_string(v) + " out of range");
      require(seen_vertexsets.insert(v).second,
              "duplicate vertexset for vertex " + std::to_string(v));
      ts.expect_symbol("=");
      spec.vertex_sets[static_cast<std::size_t>(v - 1)] = parse_predicate(ts, spec.dim);
      expect_decl_end(ts);
    } else if (kw == "representative") {
      need_frame("representative");
      int v = expect_int(ts, "a vertex index");
      require(v >= 1 && v <= spec.vertices,
              "representative index " + std::to_string(v) + " out of range");
      require(seen_reps.insert(v).second,
              "duplicate representative for vertex " + std::to_string(v));
      ts.expect_symbol("=");
      ts.expect_symbol("(");
      std::vector<double> coords;
      coords.push_back(expect_signed_number(ts, "a coordinate"));
      while (ts.accept_symbol(",")) coords.push_back(expect_signed_number(ts, "a coordinate"));
      ts.expect_symbol(")");
      require(static_cast<int>(coords.size()) == spec.dim,
              "representative for vertex " + std::to_string(v) + " has " +
                  std::to_string(coords.size()) + " coordinates, expected " +
                  std::to_string(spec.dim));
      spec.representatives[static_cast<std::size_t>(v - 1)] = std::move(coords);
      expect_decl_end(ts);
    } else if (kw == "edge") {
      need_frame("edge");
      EdgeDecl e;
      e.id = expect_edge_id(ts);
      ts.expect_symbol(":");
      e.source = expect_int(ts, "a source vertex");
      ts.expect_symbol("->");
      e.target = expect_int(ts, "a target vertex");
      require(e.source >= 1 && e.source <= spec.vertices,
              "edge '" + e.id + "' source out of range");
      require(e.target >= 1 && e.target <= spec.vertices,
              "edge '" + e.id + "' target out of range");
      const Token& mk = ts.peek();
      if (mk.type != Token::Type::Ident || mk.text != "map") ts.fail("expected 'map'");
      ts.get();
      ts.expect_symbol("(");
      e.map.push_back(detail::parse_expression(ts, spec.dim));
      while (ts.accept_symbol(",")) e.map.push_back(detail::parse_expression(ts, spec.dim));
      ts.expect_symbol(")");
      require(static_cast<int>(e.map.size()) == spec.dim,
              "edge '" + e.id + "' map has " + std::to_string(e.map.size()) +
                  " components, expected " + std::to_string(spec.dim));
      const Token& pk = ts.peek();
      if (pk.type != Token::Type::Ident || pk.text != "prob") ts.fail("expected 'prob'");
      ts.get();
      e.prob = detail::parse_expression(ts, spec.dim);
      for (const EdgeDecl& other : spec.edges)
        require(other.id != e.id, "duplicate edge id '" + e.id + "'");
      spec.edges.push_back(std::move(e));
      expect_decl_end(ts);
    } else if (kw == "delta") {
      require(!have_delta, "duplicate delta declaration");
      spec.delta = expect_signed_number(ts, "a probability floor");
      require(spec.delta > 0.0 && spec.delta <= 1.0, "delta must lie in (0, 1]");
      have_delta = true;
      expect_decl_end(ts);
    } else if (kw == "rate") {
      require(!spec.rate, "duplicate rate declaration");
      double a = expect_signed_number(ts, "a contraction rate");
      require(a > 0.0 && a < 1.0, "rate must lie in (0, 1)");
      spec.rate = a;
      expect_decl_end(ts);
    } else {
      ts.fail("unknown declaration '" + kw + "'");
    }
  }

  require(have_name, "missing system header");
  require(have_dim, "missing dim declaration");
  require(have_metric, "missing metric declaration");
  require(have_vertices, "missing vertices declaration");
  require(have_delta, "missing delta declaration");
  require(!spec.edges.empty(), "system declares no edges");
  for (int v = 1; v <= spec.vertices; ++v)
    require(seen_reps.count(v) == 1, "missing representative for vertex " + std::to_string(v));

  // Every vertex must have an outgoing edge; otherwise the chain gets stuck.
  std::vector<bool> has_out(static_cast<std::size_t>(spec.vertices), false);
  for (const EdgeDecl& e : spec.edges) has_out[static_cast<std::size_t>(e.source - 1)] = true;
  for (int v = 1; v <= spec.vertices; ++v)
    require(has_out[static_cast<std::size_t>(v - 1)],
            "vertex " + std::to_string(v) + " has no outgoing edge");

  return spec;
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* cmp_text(Comparison::Op op) {
  switch (op) {
    case Comparison::Op::LE: return "<=";
    case Comparison::Op::GE: return ">=";
    case Comparison::Op::LT: return "<";
    case Comparison::Op::GT: return ">";
  }
  return "?";
}

std::string print_predicate(const Predicate& p) {
  std::string s;
  for (std::size_t g = 0; g < p.groups.size(); ++g) {
    if (g) s += " or ";
    for (std::size_t i = 0; i < p.groups[g].size(); ++i) {
      if (i) s += " and ";
      const Comparison& c = p.groups[g][i];
      s += print_expr(*c.lhs) + " " + cmp_text(c.op) + " " + print_expr(*c.rhs);
    }
  }
  return s;
}

}  // namespace

std::string print_system(const SystemSpec& spec) {
  std::string s = "system " + spec.name + "\n";
  s += "dim " + std::to_string(spec.dim) + "\n";
  s += "metric " + metric_name(spec.metric) + "\n";
  s += "vertices " + std::to_string(spec.vertices) + "\n";
  for (int v = 1; v <= spec.vertices; ++v) {
    const Predicate& p = spec.vertex_sets[static_cast<std::size_t>(v - 1)];
    if (!p.empty()) s += "vertexset " + std::to_string(v) + " = " + print_predicate(p) + "\n";
  }
  for (int v = 1; v <= spec.vertices; ++v) {
    const auto& rep = spec.representatives[static_cast<std::size_t>(v - 1)];
    s += "representative " + std::to_string(v) + " = (";
    for (std::size_t i = 0; i < rep.size(); ++i) {
      if (i) s += ", ";
      s += format_number(rep[i]);
    }
    s += ")\n";
  }
  for (const EdgeDecl& e : spec.edges) {
    s += "edge " + e.id + " : " + std::to_string(e.source) + " -> " + std::to_string(e.target) +
         " map (";
    for (std::size_t i = 0; i < e.map.size(); ++i) {
      if (i) s += ", ";
      s += print_expr(*e.map[i]);
    }
    s += ") prob " + print_expr(*e.prob) + "\n";
  }
  s += "delta " + format_number(spec.delta) + "\n";
  if (spec.rate) s += "rate " + format_number(*spec.rate) + "\n";
  return s;
}

bool spec_equal(const SystemSpec& a, const SystemSpec& b) {
  if (a.name != b.name || a.dim != b.dim || a.metric != b.metric || a.vertices != b.vertices ||
      a.delta != b.delta || a.rate != b.rate || a.edges.size() != b.edges.size())
    return false;
  if (a.representatives != b.representatives) return false;
  for (int v = 0; v < a.vertices; ++v) {
    const Predicate& pa = a.vertex_sets[static_cast<std::size_t>(v)];
    const Predicate& pb = b.vertex_sets[static_cast<std::size_t>(v)];
    if (pa.groups.size() != pb.groups.size()) return false;
    for (std::size_t g = 0; g < pa.groups.size(); ++g) {
      if (pa.groups[g].size() != pb.groups[g].size()) return false;
      for (std::size_t i = 0; i < pa.groups[g].size(); ++i) {
        const Comparison& ca = pa.groups[g][i];
        const Comparison& cb = pb.groups[g][i];
        if (ca.op != cb.op || !expr_equal(*ca.lhs, *cb.lhs) || !expr_equal(*ca.rhs, *cb.rhs))
          return false;
      }
    }
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const EdgeDecl& ea = a.edges[i];
    const EdgeDecl& eb = b.edges[i];
    if (ea.id != eb.id || ea.source != eb.source || ea.target != eb.target ||
        ea.map.size() != eb.map.size() || !expr_equal(*ea.prob, *eb.prob))
      return false;
    for (std::size_t j = 0; j < ea.map.size(); ++j)
      if (!expr_equal(*ea.map[j], *eb.map[j])) return false;
  }
  return true;
}

}  // namespace cms
