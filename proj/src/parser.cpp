#include "greenlie/parser.hpp"

#include <array>
#include <cctype>

namespace greenlie {

ParseError::ParseError(const std::string& message, std::size_t column)
    : std::runtime_error("parse error at column " + std::to_string(column) + ": " + message),
      column_(column),
      detail_(message)
{
}

bool is_parameter_name(std::string_view name)
{
  static constexpr std::array<std::string_view, 16> kNames = {
      "alpha1", "alpha2", "alpha3", "beta11", "beta12", "beta13", "beta22", "beta22p",
      "beta32", "beta33", "gamma11", "gamma12", "gamma13", "gamma21", "gamma22", "gamma23"};
  for (auto n : kNames)
    if (n == name) return true;
  return false;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse()
  {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c)
  {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c)
  {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr()
  {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e += term();
      else if (accept('-'))
        e -= term();
      else
        return e;
    }
  }

  Expr term()
  {
    Expr e = factor();
    for (;;) {
      if (accept('*')) {
        e *= factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = factor();
        if (d.is_zero_exact()) {
          pos_ = at;
          fail("division by zero");
        }
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr factor()
  {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    std::size_t at = pos_;
    Expr b = base();
    if (accept('^')) {
      bool paren = accept('(');
      bool negative = accept('-');
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      if (pos_ - start > 6) fail("exponent too large");
      int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
      if (paren) expect(')');
      if (negative && b.is_zero_exact()) {
        pos_ = at;
        fail("division by zero");
      }
      return b.pow(negative ? -n : n);
    }
    return b;
  }

  Expr base()
  {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number()
  {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    // Scientific suffix such as 1e-3.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    try {
      return Expr(parse_rational(text_.substr(start, pos_ - start)));
    } catch (const std::invalid_argument& e) {
      pos_ = start;
      fail(e.what());
    }
  }

  Expr identifier()
  {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view id = text_.substr(start, pos_ - start);

    if (id == "tanh" || id == "exp" || id == "sin" || id == "cos") {
      expect('(');
      Expr arg = expr();
      expect(')');
      Func f = id == "tanh" ? Func::Tanh : id == "exp" ? Func::Exp : id == "sin" ? Func::Sin : Func::Cos;
      return apply(f, arg);
    }
    if (id == "x") return var(Var::X);
    if (id == "y") return var(Var::Y);
    if (id == "z") return var(Var::Z);
    if (id == "s") return var(Var::S);
    if (id == "E") return e_partial(0, 0);
    if (id.size() > 2 && id.substr(0, 2) == "E_") {
      std::string_view rest = id.substr(2);
      auto sep = rest.find('_');
      auto digits = [](std::string_view s) {
        if (s.empty() || s.size() > 3) return false;
        for (char ch : s)
          if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
        return true;
      };
      if (sep != std::string_view::npos && digits(rest.substr(0, sep)) &&
          digits(rest.substr(sep + 1)))
        return e_partial(std::stoi(std::string(rest.substr(0, sep))),
                         std::stoi(std::string(rest.substr(sep + 1))));
    }
    if (is_parameter_name(id)) return param(std::string(id));
    pos_ = start;
    fail("unknown identifier '" + std::string(id) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text)
{
  return Parser(text).parse();
}

}  // namespace greenlie
