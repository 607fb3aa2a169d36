#include <cctype>
#include <charconv>

#include "soskit/polynomial.hpp"

namespace sos {

namespace {

// Recursive descent over:
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nonneg-int)?
//   base   := number | identifier | '(' expr ')'
class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Polynomial run() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'",
                       pos_);
    return p;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Polynomial expr() {
    double sign = 1.0;
    char c = peek();
    if (c == '+' || c == '-') {
      if (c == '-') sign = -1.0;
      ++pos_;
    }
    Polynomial p = sign * term();
    while (true) {
      c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        p += (c == '-' ? -1.0 : 1.0) * term();
      } else {
        break;
      }
    }
    return p;
  }

  Polynomial term() {
    Polynomial p = factor();
    while (peek() == '*') {
      ++pos_;
      p *= factor();
    }
    return p;
  }

  Polynomial factor() {
    Polynomial p = base();
    if (peek() == '^') {
      ++pos_;
      p = p.pow(exponent());
    }
    return p;
  }

  Polynomial base() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return Polynomial::var(identifier());
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Polynomial number() {
    double v = 0.0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc{})
      throw ParseError("malformed number", pos_);
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return Polynomial(v);
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return s_.substr(start, pos_ - start);
  }

  int exponent() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("exponent must be a nonnegative integer", pos_);
    int v = 0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc{})
      throw ParseError("exponent out of range", start);
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    if (pos_ < s_.size() && s_[pos_] == '.')
      throw ParseError("exponent must be a nonnegative integer", start);
    return v;
  }
};

}  // namespace

Polynomial parse(const std::string& text) { return Parser(text).run(); }

}  // namespace sos
