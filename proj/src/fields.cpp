#include "greenlie/fields.hpp"

namespace greenlie {

namespace {

constexpr std::array<Var, 3> kCoords = {Var::X, Var::Y, Var::Z};

// Bounds the term-by-term division below when the divisor has several terms.
constexpr std::size_t kMaxQuotientTerms = 2000;

}  // namespace

VectorField lie_bracket(const VectorField& f, const VectorField& g)
{
  VectorField out;
  for (int i = 0; i < 3; ++i) {
    Expr c;
    for (int l = 0; l < 3; ++l) {
      if (!f[l].is_zero_exact()) c += f[l] * differentiate(g[i], kCoords[l]);
      if (!g[l].is_zero_exact()) c -= g[l] * differentiate(f[i], kCoords[l]);
    }
    out[i] = std::move(c);
  }
  return out;
}

Expr apply_to_scalar(const VectorField& f, const Expr& phi)
{
  Expr out;
  for (int l = 0; l < 3; ++l)
    if (!f[l].is_zero_exact()) out += f[l] * differentiate(phi, kCoords[l]);
  return out;
}

std::optional<Expr> exact_quotient(const Expr& a, const Expr& b)
{
  if (b.is_zero_exact()) return std::nullopt;
  if (a.is_zero_exact()) return Expr();
  if (b.is_single_term()) return a * b.reciprocal();

  // The monomial order is a group order, so leading terms multiply; peeling
  // leading terms recovers the quotient whenever it exists.
  const auto& [lead_m, lead_c] = b.leading_term();
  Monomial lead_inv = lead_m.inverse();
  Expr rest = a;
  Expr quotient;
  for (std::size_t steps = 0; !rest.is_zero_exact(); ++steps) {
    if (steps > kMaxQuotientTerms) return std::nullopt;
    const auto& [m, c] = rest.leading_term();
    Expr t = Expr::term(m * lead_inv, c / lead_c);
    quotient += t;
    rest -= t * b;
  }
  return quotient;
}

std::optional<Expr> proportional_to(const VectorField& f, const VectorField& ref)
{
  if (ref.is_zero()) throw std::invalid_argument("reference field is zero");
  int pivot = 0;
  while (ref[pivot].is_zero_exact()) ++pivot;
  auto phi = exact_quotient(f[pivot], ref[pivot]);
  if (!phi) return std::nullopt;
  for (int i = 0; i < 3; ++i) {
    if (i == pivot) continue;
    if (f[i] != *phi * ref[i]) return std::nullopt;
  }
  return phi;
}

VectorField substitute(const VectorField& f, const Bindings& bindings)
{
  return {substitute(f.cx, bindings), substitute(f.cy, bindings), substitute(f.cz, bindings)};
}

std::string to_string(const VectorField& f)
{
  return "(" + to_string(f.cx) + ", " + to_string(f.cy) + ", " + to_string(f.cz) + ")";
}

}  // namespace greenlie
