#pragma once

// Hand-rolled seeded generators shared by the property tests.

#include "greenlie/homology.hpp"
#include "greenlie/model.hpp"

#include <algorithm>
#include <random>

namespace gen {

using greenlie::Expr;
using greenlie::Rational;

inline Rational rational(std::mt19937_64& rng, int max_num = 9, int max_den = 5)
{
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rational nonzero_rational(std::mt19937_64& rng)
{
  Rational q;
  do q = rational(rng);
  while (q == 0);
  return q;
}

inline Rational positive_rational(std::mt19937_64& rng)
{
  Rational q = nonzero_rational(rng);
  return q < 0 ? Rational(-q) : q;
}

/// Dense polynomial in the given monomial generators up to total degree.
inline Expr polynomial(std::mt19937_64& rng, const std::vector<Expr>& vars, int degree)
{
  std::vector<Expr> monomials{Expr(1)};
  std::vector<Expr> frontier{Expr(1)};
  for (int d = 1; d <= degree; ++d) {
    std::vector<Expr> next;
    for (std::size_t k = 0; k < vars.size(); ++k)
      for (const auto& m : frontier) next.push_back(m * vars[k]);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    monomials.insert(monomials.end(), next.begin(), next.end());
    frontier = next;
  }
  Expr out;
  std::bernoulli_distribution keep(0.6);
  for (const auto& m : monomials)
    if (keep(rng)) out += rational(rng) * m;
  return out;
}

inline Expr poly_xyz(std::mt19937_64& rng, int degree)
{
  return polynomial(rng, {greenlie::x(), greenlie::y(), greenlie::z()}, degree);
}

inline Expr poly_xy(std::mt19937_64& rng, int degree)
{
  return polynomial(rng, {greenlie::x(), greenlie::y()}, degree);
}

inline Expr poly_s(std::mt19937_64& rng, int degree)
{
  return polynomial(rng, {greenlie::var(greenlie::Var::S)}, degree);
}

inline greenlie::VectorField field_xyz(std::mt19937_64& rng, int degree)
{
  return {poly_xyz(rng, degree), poly_xyz(rng, degree), poly_xyz(rng, degree)};
}

/// Random parameters satisfying every sign constraint.
inline greenlie::Params valid_params(std::mt19937_64& rng)
{
  greenlie::Params p;
  auto pos = [&] { return positive_rational(rng); };
  auto neg = [&] { return Rational(-positive_rational(rng)); };
  p.alpha = {pos(), pos(), pos()};
  p.beta11 = neg();
  p.beta12 = pos();
  p.beta13 = pos();
  p.beta22 = neg();
  p.beta22p = neg();
  p.beta32 = pos();
  p.beta33 = neg();
  p.gamma = {{{pos(), pos(), pos()}, {neg(), neg(), pos()}}};
  return p;
}

inline greenlie::StructureMatrix structure(std::mt19937_64& rng)
{
  greenlie::StructureMatrix c;
  for (auto& row : c)
    for (auto& v : row) v = rational(rng);
  return c;
}

}  // namespace gen
