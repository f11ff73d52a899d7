#include "lexer.hpp"

#include <cctype>
#include <cstdlib>

namespace cms::detail {

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Type type, std::string s, int tline, int tcol) {
    Token t;
    t.type = type;
    t.text = std::move(s);
    t.line = tline;
    t.col = tcol;
    out.push_back(std::move(t));
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i, ++col;
      continue;
    }
    if (c == '\n') {
      push(Token::Type::Symbol, "\n", line, col);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    int tline = line, tcol = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      bool is_int = true;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        is_int = false;
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          is_int = false;
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      std::string s = text.substr(i, j - i);
      Token t;
      t.type = Token::Type::Number;
      t.text = s;
      t.number = std::strtod(s.c_str(), nullptr);
      t.is_int = is_int;
      t.line = tline;
      t.col = tcol;
      out.push_back(std::move(t));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      push(Token::Type::Ident, text.substr(i, j - i), tline, tcol);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    // Multi-character operators first.
    auto two = (i + 1 < text.size()) ? text.substr(i, 2) : std::string();
    if (two == "->" || two == "<=" || two == ">=") {
      push(Token::Type::Symbol, two, tline, tcol);
      i += 2;
      col += 2;
      continue;
    }
    static const std::string singles = "()=,:+-*/^<>";
    if (singles.find(c) != std::string::npos) {
      push(Token::Type::Symbol, std::string(1, c), tline, tcol);
      ++i;
      ++col;
      continue;
    }
    throw SyntaxError(tline, tcol, std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.type = Token::Type::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

}  // namespace cms::detail
