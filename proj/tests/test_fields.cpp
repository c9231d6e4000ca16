#include "generators.hpp"
#include "printers.hpp"

#include "greenlie/fields.hpp"
#include "greenlie/model.hpp"
#include "greenlie/parser.hpp"

#include <doctest.h>

using namespace greenlie;

namespace {

Expr P(const char* text) { return parse_expr(text); }

}  // namespace

TEST_CASE("brackets of the symbolic model fields")
{
  ModelFields m = symbolic_fields();
  CHECK(lie_bracket(m.f[0], m.f[1]).is_zero());
  CHECK(lie_bracket(m.f0, m.f0).is_zero());
  for (int j = 0; j < 3; ++j) {
    std::string g1 = "gamma1" + std::to_string(j + 1), g2 = "gamma2" + std::to_string(j + 1);
    VectorField b = lie_bracket(m.f0, m.f[j]);
    CHECK(b.cx == -(param(g1) * param("beta11") + param(g1) * param("beta12") * e_partial(1, 0) +
                    param(g2) * param("beta12") * e_partial(0, 1)));
  }
}

TEST_CASE("apply_to_scalar")
{
  ModelFields m = symbolic_fields();
  CHECK(apply_to_scalar(m.f[0], x()) == param("gamma11"));
  CHECK(apply_to_scalar(m.f[2], formal_e()) == P("gamma13*E_1_0 + gamma23*E_0_1"));
  CHECK(apply_to_scalar(m.B, x() * y()) == P("-beta12*y - beta22p*x"));
}

TEST_CASE("proportional_to")
{
  ModelFields m = symbolic_fields();
  CHECK(proportional_to(2 * m.B, m.B) == Expr(2));
  CHECK_FALSE(proportional_to(m.f[0], m.B).has_value());
  CHECK_THROWS_AS(proportional_to(m.B, VectorField::zero()), std::invalid_argument);

  // Multiple by a non-polynomial factor with a symbolic reference.
  Expr phi = tanh(x()) * formal_e() + y();
  CHECK(proportional_to(phi * m.B, m.B) == phi);

  // The z-component must vanish too.
  VectorField off = m.B;
  off.cz = Expr(1);
  CHECK_FALSE(proportional_to(off, m.B).has_value());
}

TEST_CASE("[f_i, [f0, f_j]] is a multiple of B")
{
  ModelFields m = symbolic_fields();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto phi = proportional_to(lie_bracket(m.f[i], lie_bracket(m.f0, m.f[j])), m.B);
      REQUIRE(phi.has_value());
      CHECK(max_e_order(*phi) == 2);
    }
}

TEST_CASE("exact_quotient")
{
  Expr a = P("(x + y)*(x - 2*y + E)");
  CHECK(exact_quotient(a, P("x + y")) == P("x - 2*y + E"));
  CHECK(exact_quotient(a, P("x - 2*y + E")) == P("x + y"));
  CHECK_FALSE(exact_quotient(P("x^2 + 1"), P("x + 1")).has_value());
  CHECK(exact_quotient(P("6*x^2*y"), P("3*x")) == P("2*x*y"));
}

TEST_CASE("Jacobi identity on random quadratic fields")
{
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    VectorField f = gen::field_xyz(rng, 2), g = gen::field_xyz(rng, 2), h = gen::field_xyz(rng, 2);
    VectorField jac = lie_bracket(lie_bracket(f, g), h) + lie_bracket(lie_bracket(g, h), f) +
                      lie_bracket(lie_bracket(h, f), g);
    CHECK(jac.is_zero());
  }
}

TEST_CASE("Leibniz rule on random instances")
{
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    VectorField f = gen::field_xyz(rng, 2), g = gen::field_xyz(rng, 2);
    Expr phi = gen::poly_xyz(rng, 2);
    CHECK(lie_bracket(f, phi * g) == apply_to_scalar(f, phi) * g + phi * lie_bracket(f, g));
  }
}

TEST_CASE("antisymmetry and bilinearity")
{
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    VectorField f = gen::field_xyz(rng, 2), g = gen::field_xyz(rng, 2), h = gen::field_xyz(rng, 2);
    Expr a = gen::rational(rng);
    CHECK(lie_bracket(f, g) == Expr(-1) * lie_bracket(g, f));
    CHECK(lie_bracket(f, g + a * h) == lie_bracket(f, g) + a * lie_bracket(f, h));
    CHECK(lie_bracket(f, f).is_zero());
  }
}

TEST_CASE("B-closure for polynomial E and arbitrary phi")
{
  std::mt19937_64 rng(109);
  ModelFields sym = symbolic_fields();
  for (int trial = 0; trial < 10; ++trial) {
    ModelFields m = with_e(build_fields(gen::valid_params(rng)), gen::poly_xy(rng, 3));
    Expr phi = gen::poly_xy(rng, 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(proportional_to(lie_bracket(m.f[k], phi * m.B), m.B).has_value());
      CHECK(proportional_to(lie_bracket(lie_bracket(m.f0, m.f[k]), phi * m.B), m.B).has_value());
      for (int j = 0; j < 3; ++j)
        CHECK(proportional_to(lie_bracket(m.f[k], lie_bracket(m.f0, m.f[j])), m.B).has_value());
    }
  }
  // Formal E, nested brackets.
  Expr phi = e_partial(1, 1) * x() + formal_e();
  for (int k1 = 0; k1 < 3; ++k1)
    for (int k2 = 0; k2 < 3; ++k2)
      CHECK(proportional_to(lie_bracket(sym.f[k1], lie_bracket(sym.f[k2], phi * sym.B)), sym.B)
                .has_value());
}

TEST_CASE("vector field substitution and printing")
{
  ModelFields m = symbolic_fields();
  VectorField b = substitute(m.B, parameter_bindings(demo_params()));
  CHECK(b.cx == Rational(-1, 2));
  CHECK(b.cy == Rational(1, 3));
  CHECK(b.cz.is_zero_exact());
  CHECK(to_string(b) == "(-1/2, 1/3, 0)");
}
