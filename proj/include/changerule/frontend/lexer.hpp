#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "changerule/frontend/ast.hpp"

namespace changerule::frontend {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, SourcePos pos)
      : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
        pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

enum class TokenKind { Identifier, Keyword, String, Char, Number, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
};

inline bool is_keyword(std::string_view word) {
  static constexpr std::string_view kKeywords[] = {
      "package", "import",    "class",  "interface", "extends",  "implements", "public",
      "private", "protected", "static", "final",     "abstract", "synchronized", "void",
      "if",      "else",      "try",    "catch",     "finally",  "return",     "new",
      "null",    "true",      "false",  "this",      "throws",   "while",      "for",
      "do",      "switch"};
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

/// Splits UTF-8 source into tokens; comments and whitespace are dropped.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  auto ident_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
           static_cast<unsigned char>(c) >= 0x80;
  };
  auto ident_char = [&](char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); };

  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      const SourcePos start = pos;
      advance(2);
      while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
      if (i >= src.size()) throw SyntaxError("unterminated comment", start);
      advance(2);
      continue;
    }
    Token tok;
    tok.pos = pos;
    const std::size_t begin = i;
    if (ident_start(c)) {
      while (i < src.size() && ident_char(src[i])) advance(1);
      tok.text = std::string(src.substr(begin, i - begin));
      tok.kind = is_keyword(tok.text) ? TokenKind::Keyword : TokenKind::Identifier;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '.' || src[i] == '_'))
        advance(1);
      tok.kind = TokenKind::Number;
      tok.text = std::string(src.substr(begin, i - begin));
    } else if (c == '"' || c == '\'') {
      advance(1);
      while (i < src.size() && src[i] != c) {
        if (src[i] == '\n') throw SyntaxError("unterminated literal", tok.pos);
        advance(src[i] == '\\' ? 2 : 1);
      }
      if (i >= src.size()) throw SyntaxError("unterminated literal", tok.pos);
      advance(1);
      tok.kind = c == '"' ? TokenKind::String : TokenKind::Char;
      tok.text = std::string(src.substr(begin, i - begin));
    } else if (std::string_view("{}()[];,.=!<>*@").find(c) != std::string_view::npos) {
      advance(1);
      tok.kind = TokenKind::Punct;
      tok.text = std::string(1, c);
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", tok.pos);
    }
    out.push_back(std::move(tok));
  }
  out.push_back(Token{TokenKind::End, "", pos});
  return out;
}

}  // namespace changerule::frontend
