#pragma once

#include "greenlie/expr.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace greenlie {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t column);
  /// 1-based column of the offending character.
  std::size_t column() const { return column_; }
  /// Message without the column prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t column_;
  std::string detail_;
};

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ('+'|'-') factor | base ('^' ['-'] integer)?
///   base   := number | identifier | function '(' expr ')' | '(' expr ')'
/// Identifiers: x y z s, E, E_<dx>_<dy>, and the model parameter names.
/// Functions: tanh exp sin cos.
Expr parse_expr(std::string_view text);

bool is_parameter_name(std::string_view name);

}  // namespace greenlie
