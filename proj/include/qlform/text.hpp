/// @file text.hpp
/// Tokenizer and expression parser for polynomial / rational-function text.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlform/rational.hpp"

namespace qlform {

enum class TokenKind { Ident, Number, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Splits text into identifiers, decimal numbers and the symbols
/// `+ - * / ^ ( ) , ; = < > << >>`. `#` starts a comment to end of line.
std::vector<Token> tokenize(std::string_view text);

/// Recursive-descent reader over a token stream. Throws ParseError with the
/// line and column of the offending token.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool accept(std::string_view symbol);
  void expect(std::string_view symbol);
  bool at_end() const { return peek().kind == TokenKind::End; }
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] static void fail_at(const Token& t, const std::string& message);

  /// expr := term (('+'|'-') term)*; term := power (('*'|'/') power)*;
  /// power := atom ('^' number)?; atom := 0 | 1 | name | '(' expr ')'.
  RationalFunction parse_rational(std::span<const std::string> names);
  /// Only the `power` production, used where '*' has a different meaning.
  RationalFunction parse_power(std::span<const std::string> names);

 private:
  RationalFunction parse_term(std::span<const std::string> names);
  RationalFunction parse_atom(std::span<const std::string> names);

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

RationalFunction parse_rational(std::string_view text, std::span<const std::string> names);
/// Rejects non-polynomial input.
Polynomial2 parse_polynomial(std::string_view text, std::span<const std::string> names);

}  // namespace qlform
