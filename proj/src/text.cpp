#include "qlform/text.hpp"

#include <algorithm>
#include <cctype>

#include "qlform/error.hpp"

namespace qlform {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.kind = TokenKind::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = TokenKind::Number;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if ((c == '<' || c == '>') && i + 1 < text.size() && text[i + 1] == c) {
      t.kind = TokenKind::Symbol;
      t.text = std::string(2, c);
      advance(2);
    } else if (std::string_view("+-*/^(),;=<>").find(c) != std::string_view::npos) {
      t.kind = TokenKind::Symbol;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                             ": unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const Token& TokenCursor::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

Token TokenCursor::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenCursor::accept(std::string_view symbol) {
  if (peek().kind == TokenKind::Symbol && peek().text == symbol) {
    next();
    return true;
  }
  return false;
}

void TokenCursor::expect(std::string_view symbol) {
  if (!accept(symbol)) fail("expected '" + std::string(symbol) + "'");
}

void TokenCursor::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenCursor::fail_at(const Token& t, const std::string& message) {
  const std::string near = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
  throw Error(ErrorCode::ParseError, "line " + std::to_string(t.line) + ", column " + std::to_string(t.column) +
                                         ": " + message + " near " + near);
}

RationalFunction TokenCursor::parse_rational(std::span<const std::string> names) {
  RationalFunction acc = parse_term(names);
  while (accept("+") || accept("-")) acc += parse_term(names);
  return acc;
}

RationalFunction TokenCursor::parse_term(std::span<const std::string> names) {
  RationalFunction acc = parse_power(names);
  for (;;) {
    if (accept("*")) {
      acc = acc * parse_power(names);
    } else if (peek().kind == TokenKind::Symbol && peek().text == "/") {
      const Token slash = next();
      RationalFunction d = parse_power(names);
      if (d.is_zero()) fail_at(slash, "division by zero");
      acc = acc / d;
    } else {
      return acc;
    }
  }
}

RationalFunction TokenCursor::parse_power(std::span<const std::string> names) {
  RationalFunction base = parse_atom(names);
  if (!accept("^")) return base;
  const Token e = next();
  if (e.kind != TokenKind::Number) fail_at(e, "expected exponent");
  if (e.text.size() > 6) fail_at(e, "exponent too large");
  unsigned long n = std::stoul(e.text);
  if (n > arith_limits().max_exponent) fail_at(e, "exponent exceeds cap");
  RationalFunction result = RationalFunction::one(names.size());
  RationalFunction sq = base;
  while (n > 0) {
    if (n & 1u) result = result * sq;
    n >>= 1;
    if (n > 0) sq = sq.square();
  }
  return result;
}

RationalFunction TokenCursor::parse_atom(std::span<const std::string> names) {
  const Token t = next();
  if (t.kind == TokenKind::Number) {
    if (t.text != "0" && t.text != "1") fail_at(t, "only the constants 0 and 1 exist in F2");
    return t.text == "1" ? RationalFunction::one(names.size()) : RationalFunction(names.size());
  }
  if (t.kind == TokenKind::Ident) {
    auto it = std::find(names.begin(), names.end(), t.text);
    if (it == names.end()) fail_at(t, "unknown variable");
    return RationalFunction::variable(names.size(), static_cast<std::size_t>(it - names.begin()));
  }
  if (t.kind == TokenKind::Symbol && t.text == "(") {
    RationalFunction inner = parse_rational(names);
    expect(")");
    return inner;
  }
  fail_at(t, "expected a term");
}

RationalFunction parse_rational(std::string_view text, std::span<const std::string> names) {
  TokenCursor cur(tokenize(text));
  RationalFunction f = cur.parse_rational(names);
  if (!cur.at_end()) cur.fail("trailing input");
  return f;
}

Polynomial2 parse_polynomial(std::string_view text, std::span<const std::string> names) {
  RationalFunction f = parse_rational(text, names);
  if (!f.den().is_one()) throw Error(ErrorCode::ParseError, "expected a polynomial, got a fraction");
  return f.num();
}

}  // namespace qlform
