#include "generators.hpp"
#include "printers.hpp"

#include "greenlie/parser.hpp"

#include <doctest.h>

using namespace greenlie;

namespace {

const char* const kCorpus[] = {
    "0",
    "1",
    "-3/2",
    "0.125",
    "1e-3",
    "x",
    "-x",
    "x + y + z",
    "x - y",
    "2*x*y",
    "x^2",
    "x^-2",
    "x^(-3)",
    "(x+y)^3",
    "(x-y)*(x+y)",
    "x/2",
    "x/y",
    "1/(1+x)",
    "1/(1+x)^2",
    "(x + y)/(x - y)",
    "E",
    "E_1_0",
    "E_2_1 + E_0_3",
    "beta12*E_1_0 + gamma21*E_0_1",
    "alpha1 + beta11*x + beta12*E",
    "-beta12*gamma11 - beta22p*gamma21",
    "gamma11^2*E_2_0 + gamma11*gamma21*E_1_1 + gamma21^2*E_0_2",
    "tanh(x)",
    "tanh(-x)",
    "tanh(0)",
    "tanh(2*x + y)^2",
    "1 - tanh(x)^2",
    "exp(x)*exp(-x)",
    "sin(x)^2 + cos(x)^2",
    "cos(-y)",
    "sin(x*y) - sin(y*x)",
    "1/(2 + tanh(x + y + 1))",
    "3/(4 - tanh(x/2))",
    "tanh(tanh(x))",
    "exp(1/(1+x^2))",
    "(1 + x)^-1*(1 + x)",
    "s^3 - 2*s + 1",
    "z*x*y^2 - 7/3",
    "beta13 + beta32*x - beta33*z",
    "((x))",
    "+x",
    "--x",
    "2*(x + 3*(y - 1/2))",
    "x^0",
    "1.5*x^2 - 0.25*y",
};

}  // namespace

TEST_CASE("corpus has 50 expressions")
{
  CHECK(std::size(kCorpus) == 50);
}

TEST_CASE("parse(print(parse(s))) == parse(s)")
{
  for (const char* text : kCorpus) {
    CAPTURE(text);
    Expr e = parse_expr(text);
    std::string printed = to_string(e);
    CAPTURE(printed);
    CHECK(parse_expr(printed) == e);
    CHECK(to_string(parse_expr(printed)) == printed);
  }
}

TEST_CASE("round trip on generated expressions")
{
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    Expr e = gen::poly_xyz(rng, 3);
    if (trial % 2) e = e * tanh(gen::poly_xyz(rng, 1)) / (3 + gen::poly_xy(rng, 1));
    CHECK(parse_expr(to_string(e)) == e);
  }
}

TEST_CASE("grammar values")
{
  CHECK(parse_expr("2*x^2 - x^2") == x() * x());
  CHECK(parse_expr("-x^2") == -(x() * x()));
  CHECK(parse_expr("E_2_0") == e_partial(2, 0));
  CHECK(parse_expr("beta22p") == param("beta22p"));
  CHECK(parse_expr("6/4") == Rational(3, 2));
  CHECK(parse_expr("x / 2 / 2") == x() / 4);
}

TEST_CASE("parse errors report the column")
{
  auto column_of = [](const char* text) -> std::size_t {
    try {
      parse_expr(text);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  CHECK(column_of("x +") == 4);
  CHECK(column_of("x + q") == 5);
  CHECK(column_of("tanh x") == 6);
  CHECK(column_of("(x + y") == 7);
  CHECK(column_of("x $ y") == 3);
  CHECK(column_of("1/0") == 3);
  CHECK(column_of("x^y") == 3);
  CHECK(column_of("beta99") == 1);
  try {
    parse_expr("x + q");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("column 5") != std::string::npos);
  }
}

TEST_CASE("parameter names")
{
  for (const char* n : {"alpha1", "alpha2", "alpha3", "beta11", "beta12", "beta13", "beta22",
                        "beta22p", "beta32", "beta33", "gamma11", "gamma12", "gamma13", "gamma21",
                        "gamma22", "gamma23"})
    CHECK(is_parameter_name(n));
  CHECK_FALSE(is_parameter_name("alpha4"));
  CHECK_FALSE(is_parameter_name("x"));
}
