#pragma once

#include "cms/expr.hpp"
#include "lexer.hpp"

namespace cms::detail {

// Recursive-descent expression parser shared by the standalone entry point
// and the system-file parser. dim bounds the coordinate variables; aliases
// x, y, z are available for dim <= 3.
ExprPtr parse_expression(TokenStream& ts, int dim);

}  // namespace cms::detail
