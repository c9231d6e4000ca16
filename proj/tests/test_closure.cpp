#include "generators.hpp"
#include "printers.hpp"

#include "greenlie/closure.hpp"
#include "greenlie/parser.hpp"

#include <doctest.h>

using namespace greenlie;

namespace {

Expr P(const char* text) { return parse_expr(text); }

Expr g(int row, int idx) { return param("gamma" + std::to_string(row) + std::to_string(idx)); }

// Lambda_ijk written out by hand: with T_k = [f0, f_k] and B constant,
// [T_k, phi B] = T_k(phi) B + phi [T_k, B] and [T_k, B] = -B(f_k(E)) B.
Expr lambda_by_hand(const ModelFields& m, const EBinding& e, int i, int j, int k)
{
  ModelFields mm = e ? with_e(m, *e) : m;
  Expr phi = delta_ij(m, e, i, j);
  VectorField t = lie_bracket(mm.f0, mm.f[k - 1]);
  Expr fk_e = apply_to_scalar(mm.f[k - 1], e ? *e : formal_e());
  return apply_to_scalar(t, phi) - phi * apply_to_scalar(mm.B, fk_e);
}

}  // namespace

TEST_CASE("magic_tuples")
{
  using T = std::vector<std::vector<int>>;
  CHECK(magic_tuples(3, 4) == T{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}});
  CHECK(magic_tuples(3, 3) == T{{1, 1, 1}});
  CHECK(magic_tuples(3, 7).empty());
  CHECK(magic_tuples(3, 5) == T{{1, 2, 2}, {2, 1, 2}, {2, 2, 1}});
  CHECK(magic_tuples(3, 6) == T{{2, 2, 2}});
  CHECK(magic_tuples(2, 3).size() == 2);
  for (int k = 1; k <= 6; ++k) {
    std::size_t total = 0;
    for (int n = 0; n <= 2 * k + 1; ++n) total += magic_tuples(k, n).size();
    CHECK(total == (1u << k));
  }
}

TEST_CASE("delta_ij for formal E")
{
  ModelFields m = symbolic_fields();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      Expr expected = g(1, i) * g(1, j) * e_partial(2, 0) +
                      (g(1, i) * g(2, j) + g(2, i) * g(1, j)) * e_partial(1, 1) +
                      g(2, i) * g(2, j) * e_partial(0, 2);
      CHECK(delta_ij(m, std::nullopt, i, j) == expected);
      CHECK(delta_ij(m, std::nullopt, i, j) == delta_ij(m, std::nullopt, j, i));
    }
}

TEST_CASE("delta_ij for closed forms")
{
  ModelFields m = build_fields(demo_params());
  Params p = demo_params();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      CHECK(delta_ij(m, Expr(7), i, j).is_zero_exact());
      Expr e = x() * x() / Expr(2 * p.gamma[0][i - 1] * p.gamma[0][j - 1]);
      CHECK(delta_ij(m, e, i, j) == 1);
    }
}

TEST_CASE("delta_ij_formula variants against the oracle")
{
  ModelFields m = symbolic_fields();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      Expr oracle = delta_ij(m, std::nullopt, i, j);
      CHECK(delta_ij_formula(m, std::nullopt, i, j, CrossVariant::Bracket1) == oracle);
      CHECK(delta_ij_formula(m, std::nullopt, i, j, CrossVariant::Paper2) - oracle ==
            (g(1, i) * g(2, j) + g(1, j) * g(2, i)) * e_partial(1, 1));
    }

  // With every gamma_2. zero the cross term vanishes and both variants agree.
  Bindings flat{{Atom::parameter("gamma21"), Expr()},
                {Atom::parameter("gamma22"), Expr()},
                {Atom::parameter("gamma23"), Expr()}};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      CHECK(substitute(delta_ij_formula(m, std::nullopt, i, j, CrossVariant::Paper2), flat) ==
            substitute(delta_ij_formula(m, std::nullopt, i, j, CrossVariant::Bracket1), flat));

  CHECK(to_string(CrossVariant::Paper2) == "paper_2");
  CHECK(cross_variant_from_string("bracket_1") == CrossVariant::Bracket1);
  CHECK_THROWS_AS(cross_variant_from_string("paper_3"), std::invalid_argument);
}

TEST_CASE("delta_ijk")
{
  ModelFields sym = symbolic_fields();
  ModelFields m = build_fields(demo_params());
  Params p = demo_params();
  std::mt19937_64 rng(301);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k) {
        CHECK(delta_ijk(m, gen::poly_xy(rng, 2), i, j, k).is_zero_exact());
        CHECK(delta_ijk(m, P("x^3/6"), i, j, k) ==
              Expr(p.gamma[0][i - 1] * p.gamma[0][j - 1] * p.gamma[0][k - 1]));

        Expr formal = delta_ijk(sym, std::nullopt, i, j, k);
        CHECK(delta_ijk_magic(sym, std::nullopt, i, j, k) == formal);
        CHECK(formal == apply_to_scalar(sym.f[k - 1], delta_ij(sym, std::nullopt, i, j)));

        // Coefficient of E_(2,1) as a tuple sum over magic_tuples(3, 4).
        Expr coeff;
        for (const auto& s : magic_tuples(3, 4)) coeff += g(s[0], i) * g(s[1], j) * g(s[2], k);
        Expr from_formal;
        for (const auto& [mono, c] : formal.terms())
          if (mono.exponent(Atom::e_partial(2, 1)) == 1)
            from_formal += Expr::term(mono, c) / e_partial(2, 1);
        CHECK(from_formal == coeff);
      }
}

TEST_CASE("lambda_ijk")
{
  ModelFields sym = symbolic_fields();
  ModelFields m = build_fields(demo_params());
  for (int i = 1; i <= 3; ++i)
    for (int k = 1; k <= 3; ++k) CHECK(lambda_ijk(m, Expr(3), i, 1, k).is_zero_exact());

  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 4; ++trial) {
    EBinding e = trial == 0 ? EBinding{} : EBinding{gen::poly_xy(rng, 4)};
    const ModelFields& mm = trial == 0 ? sym : m;
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k) CHECK(lambda_ijk(mm, e, i, j, k) == lambda_by_hand(mm, e, i, j, k));
  }

  // E = x^2/2: Delta_ij = g1i g1j and f_k(E) = g1k x, so Lambda = -g1i g1j g1k B(x).
  Params p = demo_params();
  Expr l = lambda_ijk(m, P("x^2/2"), 1, 2, 3);
  CHECK(l == Expr(p.gamma[0][0] * p.gamma[0][1] * p.gamma[0][2] * p.beta12));

  Params degenerate = p;
  degenerate.beta12 = 0;
  degenerate.beta22p = 0;
  ModelFields flat = build_fields_unchecked(degenerate);
  CHECK_THROWS_AS(lambda_ijk(flat, P("x^2/2"), 1, 1, 1), std::invalid_argument);
}

TEST_CASE("scalar operators agree with the E-based ones")
{
  ModelFields m = build_fields(demo_params());
  Expr e = P("x^3*y - y^2 + x");
  Expr phi = delta_ij(m, e, 2, 3);
  for (int k = 1; k <= 3; ++k) {
    CHECK(scalar_delta3(m, phi, k) == delta_ijk(m, e, 2, 3, k));
    CHECK(scalar_lambda(with_e(m, e), phi, k) == lambda_ijk(m, e, 2, 3, k));
  }
}

TEST_CASE("check_closure examples")
{
  ModelFields m = build_fields(demo_params());

  ClosureReport quartic = check_closure(m, P("x^4"), ClosureMode::Symbolic);
  CHECK_FALSE(quartic.all_constant());
  CHECK_FALSE(quartic.closes());

  ClosureReport affine = check_closure(m, P("3*x - y/2 + 1"), ClosureMode::Symbolic);
  CHECK(affine.closes());
  CHECK_FALSE(affine.heisenberg);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(affine.c[i][j].is_zero_exact());
  CHECK(affine.realized_span_dim >= 2);
  CHECK(affine.realized_span_dim <= 3);

  Params p = demo_params();
  Expr diag = x() * x() / Expr(2 * p.gamma[0][0] * p.gamma[0][0]);
  ClosureReport d = check_closure(m, diag, ClosureMode::Symbolic);
  CHECK(d.all_constant());
  CHECK(d.all_delta3_zero());
  CHECK(d.c[0][0] == 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(d.c[i][j] == d.c[j][i]);
  CHECK(d.b_central == std::array<bool, 3>{false, false, false});
}

TEST_CASE("check_closure modes")
{
  ModelFields m = build_fields(demo_params());
  CHECK_THROWS_AS(check_closure(m, std::nullopt, ClosureMode::Numeric), std::invalid_argument);

  ClosureReport formal = check_closure(m, std::nullopt, ClosureMode::Symbolic);
  CHECK_FALSE(formal.all_constant());

  // exp candidates are always measured numerically.
  ClosureReport ex = check_closure(m, exp(x() / 3), ClosureMode::Symbolic);
  CHECK(ex.mode == ClosureMode::Numeric);
  CHECK_FALSE(ex.all_constant());

  Expr poly = P("x^2*y/5 + y^2");
  ClosureReport sym = check_closure(m, poly, ClosureMode::Symbolic, CrossVariant::Bracket1, 9);
  ClosureReport num = check_closure(m, poly, ClosureMode::Numeric, CrossVariant::Bracket1, 9);
  CHECK(sym.constant_ok == num.constant_ok);
  CHECK(sym.delta3_zero == num.delta3_zero);
  CHECK(sym.lambda_zero == num.lambda_zero);

  nlohmann::json j = to_json(sym);
  CHECK(j["seed"] == 9);
  CHECK(j["mode"] == "symbolic");
  CHECK(j["cross_variant"] == "bracket_1");
  CHECK(j.dump() == to_json(check_closure(m, poly, ClosureMode::Symbolic, CrossVariant::Bracket1, 9)).dump());
}

TEST_CASE("EJet evaluates partials of a closed form")
{
  EJet jet(P("x^3*y^2"), 3);
  Assignment a = jet.at(2.0, 3.0);
  CHECK(a.at(Atom::e_partial(0, 0)) == doctest::Approx(72));
  CHECK(a.at(Atom::e_partial(2, 1)) == doctest::Approx(6 * 2 * 2 * 3));
  CHECK(a.at(Atom::e_partial(0, 3)) == doctest::Approx(0));

  EJet pole(P("1/(x - 1)"), 2);
  CHECK_THROWS_AS(pole.at(1.0, 0.0), UnevaluableCandidate);
}
