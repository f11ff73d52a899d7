#pragma once

#include <string>
#include <vector>

#include "cms/errors.hpp"

namespace cms::detail {

struct Token {
  enum class Type { Number, Ident, Symbol, End };
  Type type = Type::End;
  std::string text;
  double number = 0.0;
  bool is_int = false;  // Number without '.' or exponent
  int line = 0, col = 0;
};

// Tokenizes a whole source string. '#' comments run to end of line.
// Newlines are preserved as Symbol tokens ("\n") so line-oriented grammars
// can see declaration boundaries.
std::vector<Token> tokenize(const std::string& text);

// Cursor over a token vector with error reporting.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& get() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }
  bool at_end() const { return peek().type == Token::Type::End; }

  bool peek_symbol(const std::string& s) const {
    return peek().type == Token::Type::Symbol && peek().text == s;
  }
  bool accept_symbol(const std::string& s) {
    if (!peek_symbol(s)) return false;
    get();
    return true;
  }
  void expect_symbol(const std::string& s) {
    if (!accept_symbol(s)) fail("expected '" + s + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(peek().line, peek().col, msg + x_found());
  }

 private:
  std::string x_found() const {
    const Token& t = peek();
    if (t.type == Token::Type::End) return ", found end of input";
    if (t.text == "\n") return ", found end of line";
    return ", found '" + t.text + "'";
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace cms::detail
