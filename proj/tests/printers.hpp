#pragma once

#include "greenlie/expr.hpp"

#include <doctest.h>

namespace doctest {
template <>
struct StringMaker<greenlie::Expr> {
  static String convert(const greenlie::Expr& e) { return greenlie::to_string(e).c_str(); }
};
}  // namespace doctest
